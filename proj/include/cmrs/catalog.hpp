#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "cmrs/io.hpp"

namespace cmrs {

inline constexpr std::uint64_t kCatalogMaxOrder = 64;

struct CatalogEntry {
  std::string kind;
  std::string group;
  nlohmann::json params;
  std::string path;  // relative to the catalog root
  std::string digest;  // SHA-256 of the payload bytes, hex
  std::vector<std::string> provenance;
};

struct CatalogReport {
  std::vector<CatalogEntry> entries;
  std::vector<std::string> unknown;  // instances with an Unknown verdict
  std::vector<std::string> defects;  // combinations that failed; expected empty
};

struct CatalogOptions {
  std::uint64_t max_order = 16;
  std::set<std::string> kinds = {"partition", "cm_partition", "kas", "mrs"};
  search::Options search;
};

std::string sha256_hex(const std::string& bytes);

/// Writes `bytes` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Constructs, verifies and persists every combination of the grid, then
/// writes index.json. Throws PreconditionError when max_order exceeds
/// kCatalogMaxOrder.
CatalogReport build_catalog(const std::filesystem::path& root, const CatalogOptions& opt);

struct LoadReport {
  std::size_t loaded = 0;
  std::vector<std::string> defects;  // digest, parse, verification or round-trip failures
};

/// Reads index.json and re-verifies every entry.
LoadReport load_catalog(const std::filesystem::path& root);

}  // namespace cmrs
