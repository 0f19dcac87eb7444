#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "soficlab/cli.hpp"
#include "soficlab/error.hpp"

namespace soficlab::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput(where + ": " + what);
}

void check_keys(const toml::table& t, const std::string& where, const std::set<std::string_view>& allowed) {
  for (const auto& [k, v] : t)
    if (!allowed.contains(k.str())) fail(where, "unknown key \"" + std::string(k.str()) + "\"");
}

std::string get_string(const toml::table& t, std::string_view key, const std::string& where) {
  const auto* node = t.get(key);
  if (!node) fail(where, "missing key \"" + std::string(key) + "\"");
  const auto v = node->value<std::string>();
  if (!v) fail(where, "\"" + std::string(key) + "\" must be a string");
  return *v;
}

std::optional<std::int64_t> opt_int(const toml::table& t, std::string_view key, const std::string& where) {
  const auto* node = t.get(key);
  if (!node) return std::nullopt;
  if (!node->is_integer()) fail(where, "\"" + std::string(key) + "\" must be an integer");
  return node->value<std::int64_t>();
}

std::size_t opt_size(const toml::table& t, std::string_view key, const std::string& where, std::size_t fallback,
                     std::size_t min_value = 0) {
  const auto v = opt_int(t, key, where);
  if (!v) return fallback;
  if (*v < static_cast<std::int64_t>(min_value))
    fail(where, "\"" + std::string(key) + "\" must be at least " + std::to_string(min_value));
  return static_cast<std::size_t>(*v);
}

bool opt_bool(const toml::table& t, std::string_view key, const std::string& where, bool fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if (!node->is_boolean()) fail(where, "\"" + std::string(key) + "\" must be a boolean");
  return *node->value<bool>();
}

const toml::table* opt_table(const toml::table& t, std::string_view key, const std::string& where) {
  const auto* node = t.get(key);
  if (!node) return nullptr;
  if (!node->is_table()) fail(where, "\"" + std::string(key) + "\" must be a table");
  return node->as_table();
}

std::vector<std::string> string_array(const toml::node& node, const std::string& where) {
  const auto* arr = node.as_array();
  if (!arr) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : *arr) {
    const auto s = x.value<std::string>();
    if (!s) fail(where, "expected an array of strings");
    out.push_back(*s);
  }
  return out;
}

std::vector<std::uint32_t> index_array(const toml::node& node, const std::string& where) {
  const auto* arr = node.as_array();
  if (!arr) fail(where, "expected an array of point indices");
  std::vector<std::uint32_t> out;
  out.reserve(arr->size());
  for (const auto& x : *arr) {
    const auto v = x.value<std::int64_t>();
    if (!v || *v < 0 || *v > std::numeric_limits<std::uint32_t>::max())
      fail(where, "point indices must be nonnegative integers");
    out.push_back(static_cast<std::uint32_t>(*v));
  }
  return out;
}

std::vector<std::vector<std::string>> matrix_rows(const toml::node& node, const std::string& where) {
  const auto* arr = node.as_array();
  if (!arr) fail(where, "expected a matrix given as an array of rows");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : *arr) rows.push_back(string_array(r, where));
  return rows;
}

ChainEntry parse_chain_entry(const toml::table& t, const std::string& where) {
  if (t.contains("builtin")) {
    check_keys(t, where, {"builtin", "modulus", "levels"});
    const std::string b = get_string(t, "builtin", where);
    if (b != "abelianization") fail(where, "unknown builtin chain \"" + b + "\"");
    AbelianizationLevels a;
    a.modulus = opt_size(t, "modulus", where, 2, 2);
    a.levels = opt_size(t, "levels", where, 1, 1);
    return a;
  }
  if (const auto* q = t.get("quotient_perms")) {
    check_keys(t, where, {"quotient_perms"});
    if (!q->is_table()) fail(where, "quotient_perms must map generator names to permutations");
    QuotientLevel level;
    for (const auto& [k, v] : *q->as_table()) {
      if (k.str().size() != 1) fail(where, "generator names are single letters");
      level.perms[k.str()[0]] = index_array(v, where + ".quotient_perms." + std::string(k.str()));
    }
    return level;
  }
  if (const auto* s = t.get("subgroup")) {
    check_keys(t, where, {"subgroup"});
    return SubgroupLevel{string_array(*s, where + ".subgroup")};
  }
  if (const auto* r = opt_table(t, "random", where)) {
    check_keys(t, where, {"random"});
    check_keys(*r, where + ".random", {"N", "seed"});
    RandomLevel level;
    level.size = opt_size(*r, "N", where + ".random", 0, 1);
    if (level.size == 0) fail(where + ".random", "missing key \"N\"");
    if (auto seed = opt_int(*r, "seed", where + ".random")) level.seed = static_cast<std::uint64_t>(*seed);
    return level;
  }
  fail(where, "a chain level needs one of builtin, quotient_perms, subgroup, random");
}

SubshiftConfig parse_subshift(const toml::table& t) {
  const std::string where = "subshift";
  check_keys(t, where, {"kind", "dim", "matrix", "components"});
  SubshiftConfig s;
  const std::string kind = get_string(t, "kind", where);
  if (kind == "kernel") {
    s.kind = SubshiftSpec::Kind::kernel;
    const auto* m = t.get("matrix");
    if (!m) fail(where, "kind = \"kernel\" needs a matrix");
    s.matrix = matrix_rows(*m, where + ".matrix");
  } else if (kind == "ker_coboundary") {
    s.kind = SubshiftSpec::Kind::ker_coboundary;
    s.dim = opt_size(t, "dim", where, 2, 1);
  } else if (kind == "full_shift") {
    s.kind = SubshiftSpec::Kind::full_shift;
    s.components = opt_size(t, "components", where, 1, 1);
  } else {
    fail(where, "unknown subshift kind \"" + kind + "\"");
  }
  return s;
}

ComplexConfig parse_complex(const toml::table& t) {
  const std::string where = "complex";
  check_keys(t, where, {"type", "orbit_counts", "coboundary", "acyclic"});
  ComplexConfig c;
  const std::string type = t.contains("type") ? get_string(t, "type", where) : "cayley";
  if (type == "cayley") {
    c.cayley = true;
    if (t.contains("orbit_counts") || t.contains("coboundary"))
      fail(where, "the cayley complex is built from the presentation; remove orbit_counts/coboundary");
  } else if (type == "explicit") {
    c.cayley = false;
    const auto* oc = t.get("orbit_counts");
    const auto* cb = t.get("coboundary");
    if (!oc || !cb) fail(where, "an explicit complex needs orbit_counts and coboundary");
    for (auto v : index_array(*oc, where + ".orbit_counts")) c.orbit_counts.push_back(v);
    const auto* arr = cb->as_array();
    if (!arr) fail(where, "coboundary must be an array of matrices");
    for (std::size_t k = 0; k < arr->size(); ++k)
      c.coboundaries.push_back(matrix_rows(*arr->get(k), where + ".coboundary[" + std::to_string(k) + "]"));
  } else {
    fail(where, "unknown complex type \"" + type + "\"");
  }
  if (const auto* a = t.get("acyclic"))
    for (auto v : index_array(*a, where + ".acyclic")) c.acyclic.push_back(v);
  return c;
}

}  // namespace

std::optional<ExperimentKind> parse_kind(std::string_view text) {
  static const std::map<std::string_view, ExperimentKind> kinds{
      {"entropy", ExperimentKind::entropy},           {"betti", ExperimentKind::betti},
      {"defect", ExperimentKind::defect},             {"luck", ExperimentKind::luck},
      {"oracle-check", ExperimentKind::oracle_check}, {"chain-info", ExperimentKind::chain_info}};
  const auto it = kinds.find(text);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::entropy: return "entropy";
    case ExperimentKind::betti: return "betti";
    case ExperimentKind::defect: return "defect";
    case ExperimentKind::luck: return "luck";
    case ExperimentKind::oracle_check: return "oracle-check";
    case ExperimentKind::chain_info: return "chain-info";
  }
  return "?";
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw InvalidInput(os.str());
  }
  check_keys(root, source,
             {"name", "field", "dim", "tail", "seed", "rational", "prime_count", "max_word_length", "reference_group",
              "presentation", "chain", "complex", "subshift", "caps"});

  ExperimentConfig c;
  if (root.contains("name")) c.name = get_string(root, "name", source);
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    fail(source, "name must be a nonempty file-name stem");
  const std::size_t field = opt_size(root, "field", source, 2, 2);
  if (!is_prime(field) || field > std::numeric_limits<std::uint32_t>::max())
    fail(source, "field = " + std::to_string(field) + " is not a prime below 2^32");
  c.prime = static_cast<std::uint32_t>(field);
  c.dim = opt_size(root, "dim", source, 1);
  c.tail = opt_size(root, "tail", source, kDefaultTailWindow, 1);
  if (auto s = opt_int(root, "seed", source)) c.seed = static_cast<std::uint64_t>(*s);
  c.rational = opt_bool(root, "rational", source, true);
  c.prime_count = opt_size(root, "prime_count", source, 3, 1);
  c.max_word_length = opt_size(root, "max_word_length", source, 4, 1);
  if (root.contains("reference_group")) c.reference_group = get_string(root, "reference_group", source);

  const auto* pres = opt_table(root, "presentation", source);
  if (!pres) fail(source, "missing [presentation]");
  check_keys(*pres, "presentation", {"generators", "relators"});
  c.generators = get_string(*pres, "generators", "presentation");
  if (const auto* r = pres->get("relators")) c.relators = string_array(*r, "presentation.relators");

  const auto* chain = opt_table(root, "chain", source);
  if (!chain) fail(source, "missing [chain]");
  check_keys(*chain, "chain", {"level"});
  const auto* levels = chain->get("level");
  if (!levels || !levels->is_array_of_tables() || levels->as_array()->empty())
    fail("chain", "needs at least one [[chain.level]] entry");
  std::size_t k = 0;
  for (const auto& entry : *levels->as_array())
    c.chain.push_back(parse_chain_entry(*entry.as_table(), "chain.level[" + std::to_string(k++) + "]"));

  if (const auto* cx = opt_table(root, "complex", source)) c.complex = parse_complex(*cx);
  if (const auto* sx = opt_table(root, "subshift", source)) c.subshift = parse_subshift(*sx);
  if (const auto* caps = opt_table(root, "caps", source)) {
    check_keys(*caps, "caps", {"coset_cap", "oracle_cap", "exact_rank_limit"});
    c.caps.coset_cap = opt_size(*caps, "coset_cap", "caps", c.caps.coset_cap, 1);
    c.caps.oracle_cap = opt_size(*caps, "oracle_cap", "caps", c.caps.oracle_cap, 1);
    c.caps.exact_rank_limit = opt_size(*caps, "exact_rank_limit", "caps", c.caps.exact_rank_limit);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto c = parse_config(buf.str(), path.string());
  apply_environment(c.caps);
  return c;
}

void apply_environment(Caps& caps) {
  const char* v = std::getenv("SOFICLAB_COSET_CAP");
  if (!v || !*v) return;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(v, &end, 10);
  if (*end != '\0' || cap == 0) throw InvalidInput("SOFICLAB_COSET_CAP must be a positive integer");
  caps.coset_cap = static_cast<std::size_t>(cap);
}

}  // namespace soficlab::cli
