#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace keybasket {

/// Incremental SHA-256 used for cache fingerprints.
class Fingerprint {
 public:
  Fingerprint();
  ~Fingerprint();
  Fingerprint(const Fingerprint&) = delete;
  Fingerprint& operator=(const Fingerprint&) = delete;

  Fingerprint& add(std::string_view bytes);
  /// Adds the file's bytes; throws keybasket::Error when it cannot be read.
  Fingerprint& add_file(const std::filesystem::path& path);
  /// Lowercase hex digest. The object cannot be updated afterwards.
  std::string hex();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace keybasket
