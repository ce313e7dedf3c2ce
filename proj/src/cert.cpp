#include "classprod/cert.hpp"

#include <fstream>

#include "json.hpp"

namespace classprod {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string mat_hex(const Mat& m, int p, int k) {
  // reuse the canonical packing through a throwaway element-like encoding
  static const char* digits = "0123456789abcdef";
  int bits = 1;
  while ((1 << bits) < p) ++bits;
  std::string raw;
  uint32_t acc = 0;
  int nacc = 0;
  for (scalar_t e : m.a) {
    uint32_t v = e;
    for (int i = 0; i < k; ++i) {
      acc |= (v % p) << nacc;
      nacc += bits;
      v /= p;
      while (nacc >= 8) {
        raw.push_back(static_cast<char>(acc & 0xff));
        acc >>= 8;
        nacc -= 8;
      }
    }
  }
  if (nacc) raw.push_back(static_cast<char>(acc & 0xff));
  std::string out;
  for (unsigned char c : raw) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

Mat mat_from_hex(const std::string& hex, int dim, int p, int k) {
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(Errc::corrupt_document, "bad hex digit in matrix");
  };
  require(hex.size() % 2 == 0, Errc::corrupt_document, "odd hex length");
  std::string raw;
  for (size_t i = 0; i < hex.size(); i += 2)
    raw.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
  int bits = 1;
  while ((1 << bits) < p) ++bits;
  Mat m(dim);
  size_t pos = 0;
  uint32_t acc = 0;
  int nacc = 0;
  long q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  for (size_t idx = 0; idx < m.a.size(); ++idx) {
    uint32_t v = 0, mul = 1;
    for (int i = 0; i < k; ++i) {
      while (nacc < bits) {
        require(pos < raw.size(), Errc::corrupt_document, "matrix hex too short");
        acc |= static_cast<uint32_t>(static_cast<unsigned char>(raw[pos++])) << nacc;
        nacc += 8;
      }
      v += (acc & ((1u << bits) - 1)) * mul;
      acc >>= bits;
      nacc -= bits;
      mul *= p;
    }
    require(v < static_cast<uint32_t>(q), Errc::corrupt_document, "digit out of range");
    m.a[idx] = static_cast<scalar_t>(v);
  }
  return m;
}

std::pair<int, int> field_of_group(const std::string& groupspec) {
  auto at = groupspec.find('@');
  require(at != std::string::npos, Errc::corrupt_document, "bad group string");
  FieldPtr F = field_from_name(groupspec.substr(at + 1));
  return {F->p(), F->k()};
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
  auto [p, k] = field_of_group(cert.group);
  ordered_json j;
  j["schema_version"] = kCertSchemaVersion;
  j["kind"] = cert.kind;
  j["group"] = cert.group;
  j["element"] = cert.element_hex;
  j["bound"] = cert.bound;
  j["achieved_length"] = cert.achieved_length;
  j["blocks"] = cert.blocks;
  j["paper_bound_met"] = cert.paper_bound_met;
  ordered_json fs = ordered_json::array();
  for (const CertFactor& f : cert.factors) {
    ordered_json jf;
    jf["conjugator"] = mat_hex(f.conj, p, k);
    jf["subgroup"] = f.tag;
    jf["payload"] = mat_hex(f.payload, p, k);
    fs.push_back(std::move(jf));
  }
  j["factors"] = std::move(fs);
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text, const std::string& expect_group) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::corrupt_document, std::string("json parse: ") + e.what());
  }
  try {
    require(j.at("schema_version").get<int>() == kCertSchemaVersion, Errc::schema_mismatch,
            "unsupported schema version");
    Certificate cert;
    cert.kind = j.at("kind").get<std::string>();
    cert.group = j.at("group").get<std::string>();
    if (!expect_group.empty())
      require(cert.group == expect_group, Errc::schema_mismatch,
              "certificate is for " + cert.group + ", expected " + expect_group);
    cert.element_hex = j.at("element").get<std::string>();
    cert.bound = j.at("bound").get<long>();
    cert.achieved_length = j.at("achieved_length").get<long>();
    cert.blocks = j.at("blocks").get<int>();
    cert.paper_bound_met = j.at("paper_bound_met").get<bool>();
    auto [p, k] = field_of_group(cert.group);
    auto R = build_realization(cert.group);
    for (const auto& jf : j.at("factors")) {
      CertFactor f;
      f.conj = mat_from_hex(jf.at("conjugator").get<std::string>(), R->dim, p, k);
      f.payload = mat_from_hex(jf.at("payload").get<std::string>(), R->dim, p, k);
      f.tag = jf.at("subgroup").get<std::string>();
      cert.factors.push_back(std::move(f));
    }
    return cert;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::corrupt_document, std::string("certificate fields: ") + e.what());
  }
}

void store_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::corrupt_document, "cannot open " + path);
  out << certificate_to_json(cert);
  require(out.good(), Errc::corrupt_document, "write failed for " + path);
}

Certificate load_certificate(const std::string& path, const std::string& expect_group) {
  std::ifstream in(path);
  require(in.good(), Errc::corrupt_document, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return certificate_from_json(text, expect_group);
}

}  // namespace classprod
