#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "osr/cli.h"

namespace osr::cli {

namespace {

using nlohmann::json;

int RequireCount(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw ParseError(std::string("missing key \"") + key + "\"");
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ParseError(std::string("\"") + key + "\" must be a positive integer");
  }
  return v.get<int>();
}

ComplexMatrix ParseMatrix(const json& m, int index, int n) {
  const std::string where = "matrices[" + std::to_string(index) + "]";
  if (!m.is_array() || static_cast<int>(m.size()) != n) {
    throw ParseError(where + ": expected " + std::to_string(n) + " rows");
  }
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = m[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ParseError(where + ": row " + std::to_string(i) + " must have " +
                       std::to_string(n) + " entries");
    }
    for (int j = 0; j < n; ++j) {
      const json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number()) {
        throw ParseError(where + ": entry (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") must be a [re, im] pair");
      }
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ParseError(where + ": entry (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") is not finite");
      }
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

TupleFile ParseTupleFile(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("document must be an object");
  const int n = RequireCount(doc, "n");
  const int d = RequireCount(doc, "d");
  if (!doc.contains("matrices") || !doc["matrices"].is_array()) {
    throw ParseError("missing array \"matrices\"");
  }
  const json& mats = doc["matrices"];
  if (static_cast<int>(mats.size()) != d) {
    throw ParseError("\"matrices\" has " + std::to_string(mats.size()) +
                     " entries but d = " + std::to_string(d));
  }
  std::vector<ComplexMatrix> parsed;
  parsed.reserve(d);
  for (int k = 0; k < d; ++k) parsed.push_back(ParseMatrix(mats[k], k, n));

  std::optional<std::string> name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  return {std::move(name), MatrixTuple(std::move(parsed)),
          "sha256:" + Sha256Hex(text)};
}

TupleFile LoadTupleFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseTupleFile(buf.str());
}

}  // namespace osr::cli
