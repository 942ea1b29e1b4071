#include "keybasket/fingerprint.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "keybasket/error.hpp"

namespace keybasket {

struct Fingerprint::Impl {
  EVP_MD_CTX* ctx = nullptr;
  bool finished = false;
};

Fingerprint::Fingerprint() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (!impl_->ctx || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1)
    throw Error("cannot initialise SHA-256");
}

Fingerprint::~Fingerprint() { EVP_MD_CTX_free(impl_->ctx); }

Fingerprint& Fingerprint::add(std::string_view bytes) {
  if (impl_->finished) throw Error("fingerprint already finalised");
  // length prefix keeps ("ab","c") distinct from ("a","bc")
  const auto len = static_cast<std::uint64_t>(bytes.size());
  EVP_DigestUpdate(impl_->ctx, &len, sizeof len);
  EVP_DigestUpdate(impl_->ctx, bytes.data(), bytes.size());
  return *this;
}

Fingerprint& Fingerprint::add_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(impl_->ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return *this;
}

std::string Fingerprint::hex() {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(impl_->ctx, md.data(), &len);
  impl_->finished = true;
  std::string out;
  char b[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    out += b;
  }
  return out;
}

}  // namespace keybasket
