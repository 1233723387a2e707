#include "nszcap/channel_document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nszcap {

namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError("channel document: missing field '" + where + key + "'");
  }
  return j.at(key);
}

int count_field(const json& j, const std::string& key) {
  const json& v = field(j, key, "");
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096) {
    throw InputError("channel document: field '" + key + "' must be a positive integer");
  }
  return v.get<int>();
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw InputError("channel document: '" + where + "' must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError("channel document: '" + where + "' row " + std::to_string(r) +
                       " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw InputError("channel document: '" + where + "' entry (" + std::to_string(r) +
                         "," + std::to_string(c) + ") must be an [re, im] pair");
      }
      m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComplexMatrix> matrix_list(const json& j, const std::string& key) {
  const json& list = field(j, key, "");
  if (!list.is_array() || list.empty()) {
    throw InputError("channel document: '" + key + "' must be a non-empty array");
  }
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(matrix_from_json(list[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

double param(const ChannelDocument& doc, const std::string& key) {
  auto it = doc.params.find(key);
  if (it == doc.params.end()) {
    throw InputError("builtin '" + doc.name + "' requires parameter '" + key + "'");
  }
  return it->second;
}

double param_or(const ChannelDocument& doc, const std::string& key, double fallback) {
  auto it = doc.params.find(key);
  return it == doc.params.end() ? fallback : it->second;
}

int integer_param(const ChannelDocument& doc, const std::string& key, double value) {
  if (value != std::floor(value) || value < 1 || value > 64) {
    throw InputError("builtin '" + doc.name + "': parameter '" + key +
                     "' must be an integer in [1, 64]");
  }
  return static_cast<int>(value);
}

// Single positional parameter per built-in, for "name:value".
const std::map<std::string, std::string>& positional() {
  static const std::map<std::string, std::string> m = {
      {"identity", "d"},      {"depolarizing", "d"}, {"example4", "alpha_sq"},
      {"amplitude-damping", "r"}, {"delta", "l"}};
  return m;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw InputError("builtin parameter '" + what + "': '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

ChannelDocument parse_channel_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("channel document: not valid JSON (") + e.what() + ")");
  }
  const json& type = field(j, "type", "");
  if (!type.is_string()) throw InputError("channel document: field 'type' must be a string");
  ChannelDocument doc;
  const std::string t = type.get<std::string>();
  if (t == "kraus") {
    doc.type = ChannelDocument::Type::kKraus;
    doc.d_in = count_field(j, "d_in");
    doc.d_out = count_field(j, "d_out");
    doc.kraus = matrix_list(j, "kraus");
  } else if (t == "cq") {
    doc.type = ChannelDocument::Type::kCq;
    doc.states = matrix_list(j, "states");
  } else if (t == "builtin") {
    doc.type = ChannelDocument::Type::kBuiltin;
    const json& name = field(j, "name", "");
    if (!name.is_string()) throw InputError("channel document: field 'name' must be a string");
    doc.name = name.get<std::string>();
    if (j.contains("params")) {
      const json& p = j.at("params");
      if (!p.is_object()) throw InputError("channel document: field 'params' must be an object");
      for (const auto& [key, value] : p.items()) {
        if (!value.is_number()) {
          throw InputError("channel document: field 'params." + key + "' must be a number");
        }
        doc.params[key] = value.get<double>();
      }
    }
  } else {
    throw InputError("channel document: field 'type' must be kraus, cq or builtin, not '" + t +
                     "'");
  }
  return doc;
}

ChannelDocument read_channel_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read channel document '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_document(buf.str());
}

std::string write_channel_document(const ChannelDocument& doc) {
  json j;
  switch (doc.type) {
    case ChannelDocument::Type::kKraus: {
      j["type"] = "kraus";
      j["d_in"] = doc.d_in;
      j["d_out"] = doc.d_out;
      json list = json::array();
      for (const auto& k : doc.kraus) list.push_back(matrix_to_json(k));
      j["kraus"] = std::move(list);
      break;
    }
    case ChannelDocument::Type::kCq: {
      j["type"] = "cq";
      json list = json::array();
      for (const auto& s : doc.states) list.push_back(matrix_to_json(s));
      j["states"] = std::move(list);
      break;
    }
    case ChannelDocument::Type::kBuiltin:
      j["type"] = "builtin";
      j["name"] = doc.name;
      j["params"] = json::object();
      for (const auto& [k, v] : doc.params) j["params"][k] = v;
      break;
  }
  return j.dump(2) + "\n";
}

ChannelDocument parse_builtin_spec(const std::string& spec) {
  ChannelDocument doc;
  doc.type = ChannelDocument::Type::kBuiltin;
  const auto colon = spec.find(':');
  doc.name = spec.substr(0, colon);
  if (colon == std::string::npos) return doc;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      auto it = positional().find(doc.name);
      if (it == positional().end()) {
        throw InputError("builtin '" + doc.name + "' takes no parameters");
      }
      doc.params[it->second] = parse_number(item, it->second);
    } else {
      const std::string key = item.substr(0, eq);
      doc.params[key] = parse_number(item.substr(eq + 1), key);
    }
  }
  return doc;
}

const std::vector<BuiltinInfo>& builtin_registry() {
  static const std::vector<BuiltinInfo> reg = {
      {"identity", "d (default 2)", "noiseless quantum channel on d levels"},
      {"depolarizing", "d (default 2)",
       "completely depolarizing channel; its operator space is every d x d matrix"},
      {"example4", "alpha_sq in (0, 1]",
       "cq channel with pure outputs alpha|0> +- beta|1>; one-shot capacity 1, packing "
       "number 1/alpha_sq"},
      {"amplitude-damping", "r in [0, 1]",
       "qubit amplitude damping; activatable, superdense bound (4-2r)/(3-r)"},
      {"prop11", "none",
       "qutrit-input channel whose activated capacity (~1.1767) exceeds its packing number"},
      {"delta", "l >= 1", "noiseless classical channel with l symbols"},
  };
  return reg;
}

ResolvedChannel resolve(const ChannelDocument& doc) {
  switch (doc.type) {
    case ChannelDocument::Type::kKraus: {
      KrausChannel ch(doc.d_in, doc.d_out, doc.kraus);
      return {ncgraph_from_channel(ch), std::nullopt, "kraus channel"};
    }
    case ChannelDocument::Type::kCq: {
      CqGraph cq = cq_from_states(doc.states);
      return {ncgraph_from_cq(cq), cq, "cq channel"};
    }
    case ChannelDocument::Type::kBuiltin:
      break;
  }
  const std::string& n = doc.name;
  for (const auto& [key, value] : doc.params) {
    const auto it = positional().find(n);
    if (it == positional().end() || it->second != key) {
      throw InputError("builtin '" + n + "': unknown parameter '" + key + "'");
    }
    (void)value;
  }
  if (n == "identity") {
    const int d = integer_param(doc, "d", param_or(doc, "d", 2));
    return {ncgraph_from_channel(builtin::identity_channel(d)), std::nullopt, n};
  }
  if (n == "depolarizing") {
    const int d = integer_param(doc, "d", param_or(doc, "d", 2));
    return {ncgraph_from_channel(builtin::depolarizing_channel(d)), std::nullopt, n};
  }
  if (n == "example4") {
    const double a = param(doc, "alpha_sq");
    CqGraph cq = cq_from_states(builtin::example4_states(a));
    return {ncgraph_from_channel(builtin::example4_channel(a)), cq, n};
  }
  if (n == "amplitude-damping") {
    return {ncgraph_from_channel(builtin::amplitude_damping_channel(param(doc, "r"))),
            std::nullopt, n};
  }
  if (n == "prop11") {
    return {ncgraph_from_channel(builtin::prop11_channel()), std::nullopt, n};
  }
  if (n == "delta") {
    const int l = integer_param(doc, "l", param(doc, "l"));
    std::vector<ComplexMatrix> outs;
    for (int i = 0; i < l; ++i) outs.push_back(ket_bra(l, i, i));
    return {delta(l), CqGraph(outs), n};
  }
  throw InputError("unknown builtin '" + n + "' (see the examples command)");
}

}  // namespace nszcap
