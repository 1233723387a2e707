#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nszcap/graphspace.hpp"

namespace nszcap {

/// On-disk channel description. JSON with complex entries as [re, im] pairs:
///   {"type": "kraus", "d_in": 2, "d_out": 2, "kraus": [[[[1,0],[0,0]], ...], ...]}
///   {"type": "cq", "states": [ <matrix>, ... ]}
///   {"type": "builtin", "name": "example4", "params": {"alpha_sq": 0.75}}
struct ChannelDocument {
  enum class Type { kKraus, kCq, kBuiltin };

  Type type = Type::kKraus;
  int d_in = 0;
  int d_out = 0;
  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> states;
  std::string name;
  std::map<std::string, double> params;
};

/// Throws InputError naming the offending field.
ChannelDocument parse_channel_document(const std::string& text);
ChannelDocument read_channel_document(const std::string& path);
/// Shortest round-trip number formatting; re-parses to identical entries.
std::string write_channel_document(const ChannelDocument& doc);

/// "name" or "name:value" or "name:key=value[,key=value]".
ChannelDocument parse_builtin_spec(const std::string& spec);

struct BuiltinInfo {
  std::string name;
  std::string parameters;
  std::string description;
};
const std::vector<BuiltinInfo>& builtin_registry();

/// The graphs a document describes. `graph` is always set; `cq` only for cq
/// documents and cq-type built-ins.
struct ResolvedChannel {
  NCGraph graph;
  std::optional<CqGraph> cq;
  std::string description;
};
ResolvedChannel resolve(const ChannelDocument& doc);

}  // namespace nszcap
