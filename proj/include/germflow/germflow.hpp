#pragma once

#include "germflow/contact.hpp"
#include "germflow/errors.hpp"
#include "germflow/flow.hpp"
#include "germflow/germ.hpp"
#include "germflow/group.hpp"
#include "germflow/horn.hpp"
#include "germflow/integrator.hpp"
#include "germflow/kuo.hpp"
#include "germflow/linalg.hpp"
#include "germflow/nd.hpp"
#include "germflow/parallel.hpp"
#include "germflow/polynomial.hpp"
#include "germflow/random.hpp"
#include "germflow/sigma.hpp"
#include "germflow/spec_format.hpp"
#include "germflow/weights.hpp"
