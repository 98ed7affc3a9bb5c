#pragma once

#include <string>
#include <string_view>

#include "qubonet/network.hpp"

namespace qubonet {

// JSON document with fields shape, scaler, layout, reduction, qubo, offset,
// counts, lambda, path and hash. The hash is the SHA-256 of the compact
// sorted-key dump of every other field, so equal models hash equally.
std::string model_to_json(const CompiledModel& model);
// Throws ParseError on malformed documents and when the stored hash does not
// match the content.
CompiledModel model_from_json(std::string_view text);

std::string content_hash(const CompiledModel& model);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

void save_model(const CompiledModel& model, const std::string& path);
CompiledModel load_model(const std::string& path);

}  // namespace qubonet
