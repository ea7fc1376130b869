#include "jcsp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jcsp/errors.hpp"

namespace jcsp {

namespace {

using Json = nlohmann::ordered_json;

bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void emit(const Json& j, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(key).dump() + ": ";
      emit(value, indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (is_flat(j)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        out += j[i].dump();
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      emit(j[i], indent + 2, out);
    }
    out += "\n" + pad + "]";
  } else {
    out += j.dump();
  }
}

std::string render(const Json& j) {
  std::string out;
  emit(j, 0, out);
  out += "\n";
  return out;
}

Json stamp_json(const FileStamp& s) {
  Json g = Json::object();
  g["rng"] = s.rng;
  g["seed"] = s.seed;
  for (const auto& [k, v] : s.params) g[k] = v;
  return g;
}

Json algebra_json(const Algebra& alg) {
  Json j = Json::object();
  j["size"] = alg.size();
  Json ops = Json::object();
  for (const auto& o : alg.ops()) {
    Json op = Json::object();
    op["arity"] = o.table.arity();
    op["table"] = o.table.table();
    ops[o.name] = std::move(op);
  }
  j["ops"] = std::move(ops);
  j["jonsson"] = {alg.jonsson_names()[0], alg.jonsson_names()[1]};
  return j;
}

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::Parse, "field " + path + ": " + what);
}

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) bad(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::size_t to_count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void check_version(const Json& root) {
  const auto& v = field(root, "", "format_version");
  if (!v.is_number_integer() || v.get<std::int64_t>() != kFormatVersion) {
    bad("format_version", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
  }
}

Algebra algebra_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
  const std::size_t size = to_count(field(j, path, "size"), join(path, "size"));
  if (size == 0) bad(join(path, "size"), "must be positive");
  const Json& ops = field(j, path, "ops");
  const std::string ops_path = join(path, "ops");
  if (!ops.is_object()) bad(ops_path, "expected an object");
  std::vector<NamedOperation> named;
  for (const auto& [name, op] : ops.items()) {
    const std::string op_path = ops_path + "." + name;
    const std::size_t arity = to_count(field(op, op_path, "arity"), op_path + ".arity");
    const Json& table = field(op, op_path, "table");
    if (!table.is_array()) bad(op_path + ".table", "expected an array");
    std::size_t cells = 1;
    for (std::size_t i = 0; i < arity; ++i) {
      cells *= size;
      if (cells > (std::size_t{1} << 24)) bad(op_path, "table too large");
    }
    if (table.size() != cells) {
      bad(op_path + ".table", "expected " + std::to_string(cells) + " entries, found " + std::to_string(table.size()));
    }
    std::vector<Element> values(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      const std::size_t v = to_count(table[i], index(op_path + ".table", i));
      if (v >= size) bad(index(op_path + ".table", i), "value " + std::to_string(v) + " outside the universe");
      values[i] = static_cast<Element>(v);
    }
    named.push_back({name, OperationTable(arity, size, std::move(values))});
  }
  const Json& jon = field(j, path, "jonsson");
  const std::string jon_path = join(path, "jonsson");
  if (!jon.is_array() || jon.size() != 2 || !jon[0].is_string() || !jon[1].is_string()) {
    bad(jon_path, "expected two operation names");
  }
  std::array<std::string, 2> names{jon[0].get<std::string>(), jon[1].get<std::string>()};
  for (std::size_t i = 0; i < 2; ++i) {
    if (!ops.contains(names[i])) bad(index(jon_path, i), "names no operation");
    if (ops[names[i]]["arity"].get<std::size_t>() != 3) bad(index(jon_path, i), "Jónsson operations must be ternary");
  }
  try {
    return Algebra(size, std::move(named), std::move(names));
  } catch (const Error& e) {
    bad(path.empty() ? "<root>" : path, e.detail());
  }
}

}  // namespace

std::string algebra_to_text(const Algebra& alg, const std::optional<FileStamp>& stamp) {
  Json root = Json::object();
  root["format_version"] = kFormatVersion;
  if (stamp) root["generator"] = stamp_json(*stamp);
  const Json body = algebra_json(alg);
  for (const auto& [k, v] : body.items()) root[k] = v;
  return render(root);
}

std::string instance_to_text(const Instance& inst, const std::optional<FileStamp>& stamp) {
  Json root = Json::object();
  root["format_version"] = kFormatVersion;
  if (stamp) root["generator"] = stamp_json(*stamp);
  std::vector<const Algebra*> distinct;
  std::vector<std::size_t> var_alg;
  for (const auto& d : inst.domains) {
    std::size_t i = 0;
    while (i < distinct.size() && !(*distinct[i] == d)) ++i;
    if (i == distinct.size()) distinct.push_back(&d);
    var_alg.push_back(i);
  }
  Json algs = Json::array();
  for (const Algebra* a : distinct) algs.push_back(algebra_json(*a));
  root["algebras"] = std::move(algs);
  root["variables"] = var_alg;
  Json cons = Json::array();
  for (const auto& c : inst.constraints) {
    Json jc = Json::object();
    jc["scope"] = c.scope;
    Json tuples = Json::array();
    for (const auto& t : c.relation) tuples.push_back(t);
    jc["tuples"] = std::move(tuples);
    cons.push_back(std::move(jc));
  }
  root["constraints"] = std::move(cons);
  return render(root);
}

Algebra algebra_from_text(std::string_view text) {
  const Json root = parse_text(text);
  check_version(root);
  return algebra_from_json(root, "");
}

Instance instance_from_text(std::string_view text) {
  const Json root = parse_text(text);
  check_version(root);
  const Json& algs = field(root, "", "algebras");
  if (!algs.is_array()) bad("algebras", "expected an array");
  std::vector<Algebra> pool;
  for (std::size_t i = 0; i < algs.size(); ++i) pool.push_back(algebra_from_json(algs[i], index("algebras", i)));

  Instance inst;
  const Json& vars = field(root, "", "variables");
  if (!vars.is_array()) bad("variables", "expected an array");
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const std::size_t a = to_count(vars[v], index("variables", v));
    if (a >= pool.size()) bad(index("variables", v), "no algebra with index " + std::to_string(a));
    inst.domains.push_back(pool[a]);
  }
  const Json& cons = field(root, "", "constraints");
  if (!cons.is_array()) bad("constraints", "expected an array");
  for (std::size_t c = 0; c < cons.size(); ++c) {
    const std::string cp = index("constraints", c);
    const Json& scope_j = field(cons[c], cp, "scope");
    if (!scope_j.is_array()) bad(cp + ".scope", "expected an array");
    std::vector<std::size_t> scope, sizes;
    for (std::size_t i = 0; i < scope_j.size(); ++i) {
      const std::size_t v = to_count(scope_j[i], index(cp + ".scope", i));
      if (v >= inst.num_vars()) bad(index(cp + ".scope", i), "no variable " + std::to_string(v));
      scope.push_back(v);
      sizes.push_back(inst.domains[v].size());
    }
    const Json& tuples_j = field(cons[c], cp, "tuples");
    if (!tuples_j.is_array()) bad(cp + ".tuples", "expected an array");
    std::vector<Tuple> tuples;
    for (std::size_t t = 0; t < tuples_j.size(); ++t) {
      const std::string tp = index(cp + ".tuples", t);
      if (!tuples_j[t].is_array() || tuples_j[t].size() != scope.size()) {
        bad(tp, "expected a tuple of length " + std::to_string(scope.size()));
      }
      Tuple tuple;
      for (std::size_t i = 0; i < scope.size(); ++i) {
        const std::size_t e = to_count(tuples_j[t][i], index(tp, i));
        if (e >= sizes[i]) bad(index(tp, i), "value " + std::to_string(e) + " outside the domain");
        tuple.push_back(static_cast<Element>(e));
      }
      tuples.push_back(std::move(tuple));
    }
    try {
      inst.constraints.push_back(normalize_constraint(scope, sizes, tuples));
    } catch (const Error& e) {
      bad(cp, e.detail());
    }
  }
  return inst;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::InvalidArgument, "write failed for " + path);
}

Algebra load_algebra(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return algebra_from_text(text);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) fail(ErrorKind::Parse, path + ": " + e.detail());
    throw;
  }
}

Instance load_instance(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return instance_from_text(text);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) fail(ErrorKind::Parse, path + ": " + e.detail());
    throw;
  }
}

}  // namespace jcsp
