#include "typerank/provenance.h"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "typerank/dataset.h"
#include "typerank/error.h"

namespace typerank {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_text_file(path));
}

void Provenance::add_input(const std::filesystem::path& path) {
  inputs.emplace_back(path.filename().string(), sha256_file(path).substr(0, 16));
}

std::string Provenance::line() const {
  std::string out = std::string(kToolVersion) + " seed=" + std::to_string(seed);
  if (!inputs.empty()) {
    out += " inputs=";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (i) out += ",";
      out += inputs[i].first + ":" + inputs[i].second;
    }
  }
  return out;
}

}  // namespace typerank
