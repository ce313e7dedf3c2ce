#pragma once

#include "classprod/decomp.hpp"

namespace classprod {

inline constexpr int kCertSchemaVersion = 1;

// JSON document for a certificate; stable key order for byte-identical output.
std::string certificate_to_json(const Certificate& cert);
// Parses and validates a document. When expect_group is nonempty the
// certificate must have been issued for that groupspec (SchemaMismatch).
Certificate certificate_from_json(const std::string& text, const std::string& expect_group);

void store_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path, const std::string& expect_group);

}  // namespace classprod
