#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "ckloci/polylog.hpp"

namespace ckloci {

/// On-disk result cache. One JSON file per entry:
///   {"version", "kind", "key", "created", "payload"}
/// Entries written by another tool version are ignored (and removed by gc).
/// Writes go to a temporary file that is renamed into place.
class ResultCache {
 public:
  /// $CKLOCI_CACHE_DIR, else $XDG_CACHE_HOME/ckloci, else ~/.cache/ckloci.
  static std::filesystem::path default_dir();

  explicit ResultCache(std::filesystem::path dir, bool enabled = true);

  bool enabled() const { return enabled_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// kind is one of "locus", "dcw", "g-series"; key is any canonical
  /// parameter string (it is stored and compared verbatim).
  std::optional<std::string> get(const std::string& kind, Prime p, const std::string& key) const;
  void put(const std::string& kind, Prime p, const std::string& key, const std::string& payload) const;

  /// Removes stale or unreadable entries, or every entry when `all`.
  /// Returns the number of files removed.
  std::size_t gc(bool all = false) const;

  std::filesystem::path entry_path(const std::string& kind, Prime p, const std::string& key) const;

 private:
  std::filesystem::path dir_;
  bool enabled_;
};

std::string serialize_g_table(const GSeriesTable& t);
GSeriesTable deserialize_g_table(const std::string& text);

/// GTableStore backed by a ResultCache (kind "g-series", exact (p, n, M) keys).
std::shared_ptr<GTableStore> make_g_table_store(const ResultCache& cache);

extern const char* const kToolVersion;

}  // namespace ckloci
