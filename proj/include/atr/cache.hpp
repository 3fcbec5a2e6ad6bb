#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace atr {

/// Bumped whenever a stage payload layout changes; old entries then miss.
inline constexpr std::uint8_t kCacheFormatVersion = 1;

std::string sha256_hex(std::string_view data);

/// Digest of a file's bytes, or of a directory's regular files (relative
/// names and contents, in sorted name order).
std::string content_digest(const std::filesystem::path& path);

/// SHA-256 over the format version byte, the canonical JSON of the stage
/// config and the upstream keys in sorted order.
std::string cache_key(const nlohmann::json& stage_config, std::vector<std::string> upstream_keys);

/// $ATR_CACHE_DIR when set, otherwise ./.atr-cache.
std::filesystem::path default_cache_dir();

/// Content-addressed store of CBOR-encoded stage outputs. Unreadable or
/// corrupt entries are reported and treated as misses; failed writes are
/// reported and otherwise ignored.
class CacheStore {
 public:
  CacheStore() = default;
  explicit CacheStore(std::filesystem::path dir, bool enabled = true);

  bool enabled() const { return enabled_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path entry_path(const std::string& key) const;

  std::optional<nlohmann::json> load(const std::string& key) const;
  void store(const std::string& key, const nlohmann::json& payload) const;

 private:
  std::filesystem::path dir_;
  bool enabled_ = false;
};

}  // namespace atr
