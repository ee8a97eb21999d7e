#pragma once

// JSON file formats for nets, libraries and assignments.
//
// Numeric fields may carry a unit tag through a per-entity "units" object,
// e.g. {"c": 3, "rat": 120, "units": {"c": "fF", "rat": "ps"}}. Fields without
// a tag are SI. Accepted tags:
//   resistance  ohm, Ω, kohm, kΩ
//   capacitance F, fF, pF
//   time        s, ps, ns
// Writers always emit SI values without tags, so load(save(x)) == x exactly.

#include <filesystem>
#include <string>
#include <string_view>

#include "bufins/net.hpp"

namespace bufins {

RoutingTree parse_net(std::string_view text);
std::string dump_net(const RoutingTree& tree);
RoutingTree load_net(const std::filesystem::path& path);
void save_net(const RoutingTree& tree, const std::filesystem::path& path);

BufferLibrary parse_library(std::string_view text);
std::string dump_library(const BufferLibrary& lib);
BufferLibrary load_library(const std::filesystem::path& path);
void save_library(const BufferLibrary& lib, const std::filesystem::path& path);

/// Reads {"assignment": {vertex: buffer, ...}}; other top-level keys are
/// ignored so a solve report can be fed back in directly.
Assignment parse_assignment(std::string_view text);
std::string dump_assignment(const Assignment& assignment);
Assignment load_assignment(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace bufins
