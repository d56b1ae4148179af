#include "levy/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include "levy/error.hpp"

namespace levy {
namespace {

using Value = std::variant<double, std::string>;

struct Entry {
  Value value;
  int line;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw InputError("model file line " + std::to_string(line) + ": " + what);
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  if (key.find("..") != std::string_view::npos) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::string normalise_key(std::string_view raw) {
  std::string key;
  std::istringstream parts{std::string(raw)};
  for (std::string part; std::getline(parts, part, '.');) {
    if (!key.empty()) key += '.';
    key += trim(part);
  }
  return key;
}

// Strips a trailing comment outside a string literal.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Value parse_value(std::string_view text, const std::string& key, int line) {
  if (text.empty()) fail(line, "missing value for key '" + key + "'");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string for key '" + key + "'");
    return std::string(text.substr(1, text.size() - 2));
  }
  std::string digits;
  for (char c : text) {
    if (c != '_') digits += c;
  }
  if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || end != digits.data() + digits.size() || !std::isfinite(v)) {
    fail(line, "invalid value for key '" + key + "': " + std::string(text));
  }
  return v;
}

std::map<std::string, Entry> flatten(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::string table;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3 || line[1] == '[') fail(line_no, "malformed table header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) fail(line_no, "malformed table name '" + std::string(name) + "'");
      table = normalise_key(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const std::string_view raw_key = trim(line.substr(0, eq));
    if (!valid_key(raw_key)) fail(line_no, "malformed key '" + std::string(raw_key) + "'");
    const std::string key = (table.empty() ? "" : table + ".") + normalise_key(raw_key);
    const Value value = parse_value(trim(line.substr(eq + 1)), key, line_no);
    if (!entries.emplace(key, Entry{value, line_no}).second) fail(line_no, "duplicate key '" + key + "'");
  }
  return entries;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double number(const std::string& key) {
    const Entry& e = get(key);
    if (const double* v = std::get_if<double>(&e.value)) return *v;
    fail(e.line, "key '" + key + "' must be a number");
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::string text(const std::string& key) {
    const Entry& e = get(key);
    if (const auto* v = std::get_if<std::string>(&e.value)) return *v;
    fail(e.line, "key '" + key + "' must be a string");
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) fail(entry.line, "unknown key '" + key + "'");
    }
  }

  // Re-labels a domain error from a factory with the key it came from.
  template <class F>
  auto build(const std::string& key, F make) {
    try {
      return make();
    } catch (const DomainError& e) {
      throw InputError("model file key '" + key + "': " + e.what());
    }
  }

 private:
  const Entry& get(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw InputError("model file: missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

ClaimDistribution read_claim(Reader& r) {
  const std::string type = r.text("model.claim.type");
  if (type == "exponential") {
    const double mu = r.number("model.claim.mu");
    return r.build("model.claim.mu", [&] { return ClaimDistribution::exponential(mu); });
  }
  if (type == "pareto") {
    const double alpha = r.number("model.claim.alpha");
    const double xm = r.number("model.claim.xm");
    return r.build("model.claim.alpha", [&] { return ClaimDistribution::pareto(alpha, xm); });
  }
  if (type == "lognormal") {
    const double m = r.number("model.claim.m");
    const double s = r.number("model.claim.s");
    return r.build("model.claim.s", [&] { return ClaimDistribution::lognormal(m, s); });
  }
  if (type == "deterministic") {
    const double a = r.number("model.claim.a");
    return r.build("model.claim.a", [&] { return ClaimDistribution::deterministic(a); });
  }
  throw InputError("model file key 'model.claim.type': unknown claim law '" + type + "'");
}

}  // namespace

LevyModel parse_model(std::string_view text) {
  Reader r(flatten(text));
  const std::string type = r.text("model.type");
  auto model = [&]() -> LevyModel {
    if (type == "brownian") {
      const double p = r.number("model.p");
      const double s2 = r.number("model.sigma2", 1.0);
      return r.build("model.sigma2", [&] { return LevyModel::brownian(p, s2); });
    }
    if (type == "cramer-lundberg") {
      const double p = r.number("model.p");
      const double lambda = r.number("model.lambda");
      const ClaimDistribution claim = read_claim(r);
      return r.build("model.lambda", [&] { return LevyModel::cramer_lundberg(p, lambda, claim); });
    }
    if (type == "jump-diffusion") {
      const double p = r.number("model.p");
      const double s2 = r.number("model.sigma2");
      const double lambda = r.number("model.lambda");
      const ClaimDistribution claim = read_claim(r);
      return r.build("model.sigma2", [&] { return LevyModel::jump_diffusion(p, s2, lambda, claim); });
    }
    if (type == "stable") {
      const double alpha = r.number("model.alpha");
      const double scale = r.number("model.scale", 1.0);
      const double p = r.number("model.p", 0.0);
      const double s2 = r.number("model.sigma2", 0.0);
      return r.build("model.alpha", [&] { return LevyModel::stable(alpha, scale, p, s2); });
    }
    throw InputError("model file key 'model.type': unknown model type '" + type + "'");
  }();
  r.reject_unknown();
  return model;
}

LevyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace levy
