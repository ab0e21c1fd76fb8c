#include "ckloci/cache.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <json.hpp>

namespace ckloci {

const char* const kToolVersion = "ckloci-0.3.0";

namespace fs = std::filesystem;

namespace {

// FNV-1a; file names only, the full key is stored in the entry.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<nlohmann::json> read_entry(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

class CacheGStore : public GTableStore {
 public:
  explicit CacheGStore(ResultCache cache) : cache_(std::move(cache)) {}

  std::shared_ptr<const GSeriesTable> load(Prime p, int n, int M) override {
    auto text = cache_.get("g-series", p, key(n, M));
    if (!text) return nullptr;
    try {
      return std::make_shared<const GSeriesTable>(deserialize_g_table(*text));
    } catch (const std::exception&) {
      return nullptr;
    }
  }

  void save(const GSeriesTable& t) override { cache_.put("g-series", t.p, key(t.depth, t.order), serialize_g_table(t)); }

 private:
  static std::string key(int n, int M) { return "n=" + std::to_string(n) + ",M=" + std::to_string(M); }
  ResultCache cache_;
};

}  // namespace

fs::path ResultCache::default_dir() {
  if (const char* d = std::getenv("CKLOCI_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "ckloci";
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "ckloci";
  return fs::temp_directory_path() / "ckloci-cache";
}

ResultCache::ResultCache(fs::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

fs::path ResultCache::entry_path(const std::string& kind, Prime p, const std::string& key) const {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(kind + '\n' + key)));
  return dir_ / (kind + "-" + std::to_string(p) + "-" + hex + ".json");
}

std::optional<std::string> ResultCache::get(const std::string& kind, Prime p, const std::string& key) const {
  if (!enabled_) return std::nullopt;
  auto j = read_entry(entry_path(kind, p, key));
  if (!j) return std::nullopt;
  if (j->value("version", "") != kToolVersion || j->value("kind", "") != kind || j->value("key", "") != key ||
      j->value("p", 0u) != p || !j->contains("payload")) {
    return std::nullopt;
  }
  return (*j)["payload"].get<std::string>();
}

void ResultCache::put(const std::string& kind, Prime p, const std::string& key, const std::string& payload) const {
  if (!enabled_) return;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) return;
  nlohmann::ordered_json j;
  j["version"] = kToolVersion;
  j["kind"] = kind;
  j["p"] = p;
  j["key"] = key;
  j["created"] = utc_now();
  j["payload"] = payload;
  static std::atomic<unsigned> counter{0};
  const fs::path target = entry_path(kind, p, key);
  std::ostringstream tmpname;
  tmpname << target.filename().string() << ".tmp." << ::getpid() << "." << std::this_thread::get_id() << "."
          << counter++;
  const fs::path tmp = dir_ / tmpname.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;
    out << j.dump();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      return;
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) fs::remove(tmp, ec);
}

std::size_t ResultCache::gc(bool all) const {
  std::size_t removed = 0;
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return 0;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    bool drop = all;
    if (!drop && name.find(".tmp.") != std::string::npos) drop = true;
    if (!drop && entry.path().extension() == ".json") {
      auto j = read_entry(entry.path());
      drop = !j || j->value("version", "") != kToolVersion;
    }
    if (drop && fs::remove(entry.path(), ec)) ++removed;
  }
  return removed;
}

std::string serialize_g_table(const GSeriesTable& t) {
  nlohmann::ordered_json j;
  j["p"] = t.p;
  j["depth"] = t.depth;
  j["order"] = t.order;
  j["k0"] = t.k0;
  j["delta"] = t.delta;
  j["precision"] = t.precision;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& level : t.b) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const auto& c : level) row.push_back(c.get_str(36));
    levels.push_back(std::move(row));
  }
  j["b"] = std::move(levels);
  return j.dump();
}

GSeriesTable deserialize_g_table(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GSeriesTable t;
  t.p = j.at("p").get<Prime>();
  t.depth = j.at("depth").get<int>();
  t.order = j.at("order").get<int>();
  t.k0 = j.at("k0").get<int>();
  t.delta = j.at("delta").get<int>();
  t.precision = j.at("precision").get<std::vector<int>>();
  for (const auto& row : j.at("b")) {
    std::vector<mpz_class> level;
    level.reserve(row.size());
    for (const auto& c : row) level.emplace_back(c.get<std::string>(), 36);
    t.b.push_back(std::move(level));
  }
  if (t.b.size() != static_cast<std::size_t>(t.depth) + 1 || t.precision.size() != t.b.size()) {
    throw ParseError("inconsistent g-series table");
  }
  return t;
}

std::shared_ptr<GTableStore> make_g_table_store(const ResultCache& cache) {
  return std::make_shared<CacheGStore>(cache);
}

}  // namespace ckloci
