#include "cli/manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "proxyrank/errors.hpp"

namespace proxyrank::cli {

using nlohmann::json;

namespace {

std::string hex_digest(const void* data, std::size_t size, EVP_MD_CTX* ctx, bool finish) {
  if (size > 0) EVP_DigestUpdate(ctx, data, size);
  if (!finish) return {};
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

using DigestCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

DigestCtx new_ctx() {
  DigestCtx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  return ctx;
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::atoll(epoch));
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

}  // namespace

std::string sha256_text(const std::string& text) {
  auto ctx = new_ctx();
  return hex_digest(text.data(), text.size(), ctx.get(), true);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  auto ctx = new_ctx();
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    hex_digest(buf, static_cast<std::size_t>(in.gcount()), ctx.get(), false);
  }
  return hex_digest(nullptr, 0, ctx.get(), true);
}

std::string tool_version() { return PROXYRANK_VERSION; }

std::string RunManifest::digest() const {
  json j;
  j["command"] = command;
  j["config"] = config;
  j["tool_version"] = tool_version();
  json in = json::array();
  for (const auto& p : inputs) in.push_back({{"name", p.filename().string()}, {"sha256", sha256_file(p)}});
  j["inputs"] = in;
  return sha256_text(j.dump());
}

void RunManifest::write(const std::filesystem::path& path) const {
  json j;
  j["command"] = command;
  j["config"] = config;
  j["tool_version"] = tool_version();
  j["timestamp"] = timestamp();
  json in = json::array();
  for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  j["inputs"] = in;
  json out = json::array();
  for (const auto& p : outputs) out.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
  j["outputs"] = out;
  j["digest"] = digest();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

}  // namespace proxyrank::cli
