#include "atr/cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

#include "atr/error.hpp"
#include "atr/log.hpp"

namespace atr {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialization failed");
    }
  }

  void update(std::string_view data) {
    if (EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) throw std::runtime_error("SHA-256 update failed");
  }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest, &len) != 1) throw std::runtime_error("SHA-256 finalization failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 0xf];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.hex();
}

std::string content_digest(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) return sha256_hex(read_file(path));
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Sha256 h;
  for (const auto& f : files) {
    const auto name = fs::relative(f, path).generic_string();
    const auto body = read_file(f);
    h.update(std::to_string(name.size()) + ":" + name + std::to_string(body.size()) + ":");
    h.update(body);
  }
  return h.hex();
}

std::string cache_key(const nlohmann::json& stage_config, std::vector<std::string> upstream_keys) {
  std::sort(upstream_keys.begin(), upstream_keys.end());
  Sha256 h;
  const char version = static_cast<char>(kCacheFormatVersion);
  h.update(std::string_view(&version, 1));
  h.update(stage_config.dump());
  for (const auto& k : upstream_keys) h.update(k);
  return h.hex();
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("ATR_CACHE_DIR"); env && *env) return env;
  return ".atr-cache";
}

CacheStore::CacheStore(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

std::filesystem::path CacheStore::entry_path(const std::string& key) const { return dir_ / (key + ".cbor"); }

std::optional<nlohmann::json> CacheStore::load(const std::string& key) const {
  if (!enabled_) return std::nullopt;
  const auto path = entry_path(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    const auto bytes = read_file(path);
    auto envelope = nlohmann::json::from_cbor(bytes);
    if (!envelope.is_object() || !envelope.contains("version") || !envelope.contains("payload")) {
      throw std::runtime_error("missing envelope fields");
    }
    if (envelope["version"] != kCacheFormatVersion) {
      log::info("cache entry " + path.string() + " has an older format; recomputing");
      return std::nullopt;
    }
    if (envelope.value("key", std::string()) != key) throw std::runtime_error("key mismatch");
    return std::move(envelope["payload"]);
  } catch (const std::exception& e) {
    log::warn("corrupt cache entry " + path.string() + " (" + e.what() + "); recomputing");
    return std::nullopt;
  }
}

void CacheStore::store(const std::string& key, const nlohmann::json& payload) const {
  if (!enabled_) return;
  static std::atomic<unsigned long> counter{0};
  const auto path = entry_path(key);
  const auto tmp = dir_ / (key + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
  try {
    std::filesystem::create_directories(dir_);
    const nlohmann::json envelope = {{"version", kCacheFormatVersion}, {"key", key}, {"payload", payload}};
    const auto bytes = nlohmann::json::to_cbor(envelope);
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw std::runtime_error("write failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::exception& e) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    log::warn("cannot write cache entry " + path.string() + ": " + e.what());
  }
}

}  // namespace atr
