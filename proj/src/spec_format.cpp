#include "germflow/spec_format.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "germflow/errors.hpp"

namespace germflow {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

long long parse_integer(const std::string& tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  return v;
}

double parse_real(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected a number, got '" + tok + "'");
  return v;
}

// a/b or a plain decimal.
double parse_coefficient(const std::string& tok, std::size_t line) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return parse_real(tok, line);
  const double num = parse_real(tok.substr(0, slash), line);
  const double den = parse_real(tok.substr(slash + 1), line);
  if (den == 0.0) throw ParseError(line, "zero denominator in '" + tok + "'");
  return num / den;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::size_t count_of(long long v, std::size_t line, const char* what) {
  if (v < 0) throw ParseError(line, std::string(what) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

}  // namespace

bool GermSpec::operator==(const GermSpec& other) const {
  if (!(germ == other.germ && weights == other.weights && sigma == other.sigma && job == other.job))
    return false;
  const auto& a = group.source_generators();
  const auto& b = other.group.source_generators();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i] || group.target_generators()[i] != other.group.target_generators()[i]) return false;
  return true;
}

GermSpec parse_germ_spec(const std::string& text) {
  const auto lines = tokenize(text);
  const Line* dims = nullptr;
  for (const auto& line : lines)
    if (line.tokens[0] == "dims") {
      if (dims) throw ParseError(line.number, "duplicate dims line");
      dims = &line;
    }
  if (!dims) throw ParseError(lines.empty() ? 1 : lines.front().number, "missing dims line");
  if (dims->tokens.size() != 4) throw ParseError(dims->number, "dims expects n l p");
  const std::size_t n = count_of(parse_integer(dims->tokens[1], dims->number), dims->number, "n");
  const std::size_t l = count_of(parse_integer(dims->tokens[2], dims->number), dims->number, "l");
  const std::size_t p = count_of(parse_integer(dims->tokens[3], dims->number), dims->number, "p");
  if (n == 0 || p == 0) throw ParseError(dims->number, "n and p must be positive");
  const std::size_t m = n + l;

  GermSpec spec;
  std::vector<int> weights(m, 1);
  bool have_weights = false;
  std::vector<std::vector<int>> free_sets;
  std::vector<Eigen::MatrixXd> sources, targets;
  std::optional<std::size_t> group_line;
  std::vector<std::vector<Monomial>> terms(p);
  std::vector<std::size_t> term_lines;

  for (const auto& line : lines) {
    const auto& t = line.tokens;
    const std::string& key = t[0];
    if (key == "dims") continue;
    if (key == "weights") {
      if (have_weights) throw ParseError(line.number, "duplicate weights line");
      if (t.size() != m + 1)
        throw ParseError(line.number, "weights expects " + std::to_string(m) + " entries");
      // Rational weights are cleared by their common denominator.
      std::vector<long long> num(m), den(m, 1);
      long long lcm = 1;
      for (std::size_t i = 0; i < m; ++i) {
        const auto slash = t[i + 1].find('/');
        num[i] = parse_integer(t[i + 1].substr(0, slash), line.number);
        if (slash != std::string::npos) den[i] = parse_integer(t[i + 1].substr(slash + 1), line.number);
        if (num[i] <= 0 || den[i] <= 0) throw ParseError(line.number, "weights must be positive");
        lcm = std::lcm(lcm, den[i]);
      }
      for (std::size_t i = 0; i < m; ++i) weights[i] = static_cast<int>(num[i] * (lcm / den[i]));
      have_weights = true;
    } else if (key == "sigma") {
      if (t.size() < 2 || t[1] != "free") throw ParseError(line.number, "expected 'sigma free ...'");
      std::vector<int> set;
      for (std::size_t i = 2; i < t.size(); ++i) {
        const long long idx = parse_integer(t[i], line.number);
        if (idx < 1 || static_cast<std::size_t>(idx) > n)
          throw ParseError(line.number, "sigma index out of range 1.." + std::to_string(n));
        set.push_back(static_cast<int>(idx - 1));
      }
      free_sets.push_back(std::move(set));
    } else if (key == "group") {
      if (t.size() < 2 || (t[1] != "source" && t[1] != "target"))
        throw ParseError(line.number, "expected 'group source' or 'group target'");
      const bool source = t[1] == "source";
      const std::size_t dim = source ? n : p;
      if (t.size() != dim * dim + 2)
        throw ParseError(line.number, "group " + t[1] + " expects " + std::to_string(dim * dim) + " entries");
      Eigen::MatrixXd g(dim, dim);
      for (std::size_t i = 0; i < dim * dim; ++i) g(i / dim, i % dim) = parse_coefficient(t[i + 2], line.number);
      (source ? sources : targets).push_back(std::move(g));
      if (!group_line) group_line = line.number;
    } else if (key == "map") {
      if (t.size() != m + 3)
        throw ParseError(line.number, "map expects component, coefficient and " + std::to_string(m) + " exponents");
      const long long comp = parse_integer(t[1], line.number);
      if (comp < 1 || static_cast<std::size_t>(comp) > p)
        throw ParseError(line.number, "component index out of range 1.." + std::to_string(p));
      Monomial mono;
      mono.coefficient = parse_coefficient(t[2], line.number);
      for (std::size_t i = 0; i < m; ++i) {
        const long long e = parse_integer(t[i + 3], line.number);
        if (e < 0) throw ParseError(line.number, "negative exponent");
        mono.exponents.push_back(static_cast<int>(e));
      }
      if (mono.total_degree() == 0 && mono.coefficient != 0.0)
        throw ParseError(line.number, "constant term: germs must vanish at the origin");
      terms[comp - 1].push_back(std::move(mono));
    } else if (key == "job") {
      if (t.size() != 3) throw ParseError(line.number, "job expects a key and a value");
      spec.job[t[1]] = t[2];
    } else {
      throw ParseError(line.number, "unknown directive '" + key + "'");
    }
  }

  std::vector<Polynomial> components;
  for (auto& c : terms) components.emplace_back(m, std::move(c));
  spec.germ = MapGerm(n, l, std::move(components));
  spec.weights = WeightSystem(weights);
  spec.sigma = SigmaSet(n, free_sets);
  if (sources.size() != targets.size())
    throw ParseError(group_line.value_or(dims->number), "group source and target lines must be paired");
  try {
    spec.group = GroupAction(n, p, sources, targets);
    spec.group.require_weight_compatible(spec.weights);
  } catch (const GroupError& e) {
    throw ParseError(group_line.value_or(dims->number), e.what());
  }
  return spec;
}

GermSpec load_germ_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_germ_spec(buffer.str());
}

std::string print_germ_spec(const GermSpec& spec) {
  std::ostringstream os;
  const auto& g = spec.germ;
  os << "dims " << g.n() << ' ' << g.l() << ' ' << g.p() << '\n';
  os << "weights";
  for (int w : spec.weights.weights()) os << ' ' << w;
  os << '\n';
  for (const auto& s : spec.sigma.subspaces()) {
    os << "sigma free";
    for (int i : s) os << ' ' << (i + 1);
    os << '\n';
  }
  const auto& src = spec.group.source_generators();
  const auto& tgt = spec.group.target_generators();
  for (std::size_t k = 0; k < src.size(); ++k) {
    for (const auto* mat : {&src[k], &tgt[k]}) {
      os << "group " << (mat == &src[k] ? "source" : "target");
      for (Eigen::Index i = 0; i < mat->rows(); ++i)
        for (Eigen::Index j = 0; j < mat->cols(); ++j) os << ' ' << format_real((*mat)(i, j));
      os << '\n';
    }
  }
  for (std::size_t i = 0; i < g.p(); ++i)
    for (const auto& t : g.component(i).terms()) {
      os << "map " << (i + 1) << ' ' << format_real(t.coefficient);
      for (int e : t.exponents) os << ' ' << e;
      os << '\n';
    }
  for (const auto& [k, v] : spec.job) os << "job " << k << ' ' << v << '\n';
  return os.str();
}

}  // namespace germflow
