// Copyright 2026 The twistarg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twistarg/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "twistarg/arith.hpp"
#include "twistarg/checksum.hpp"
#include "twistarg/errors.hpp"

namespace twistarg {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ResourceError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw ResourceError("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

namespace {

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += pad;
        out += Json(k).dump();
        out += indent > 0 ? ": " : ":";
        dump_into(v, indent, depth + 1, out);
      }
      out += close + '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        out += pad;
        dump_into(v, indent, depth + 1, out);
      }
      out += close + ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

constexpr const char* kCoeffFormat = "twistarg-coefficients";
constexpr const char* kCharFormat = "twistarg-characters";
constexpr int kCacheVersion = 1;

std::string coefficient_payload(const HeckeForm& form, std::size_t n_max) {
  std::string s;
  for (std::size_t n = 1; n <= n_max; ++n) {
    s += to_decimal(form.raw(n));
    s += '\n';
  }
  return s;
}

void store_coefficients(const fs::path& file, const HeckeForm& form) {
  const std::size_t N = form.n_max();
  const std::string payload = coefficient_payload(form, N);
  Json meta;
  meta["format"] = kCoeffFormat;
  meta["version"] = kCacheVersion;
  meta["form_id"] = form.id();
  meta["weight"] = form.weight();
  meta["level"] = form.level();
  meta["root_number"] = form.root_number();
  meta["n_max"] = N;
  meta["sha256"] = sha256_hex(payload);
  std::string text = "{\"meta\": " + meta.dump() + ",\n\"coefficients\": [\n";
  std::size_t pos = 0;
  for (std::size_t n = 1; n <= N; ++n) {
    const std::size_t end = payload.find('\n', pos);
    text += '"';
    text.append(payload, pos, end - pos);
    text += n < N ? "\",\n" : "\"\n";
    pos = end + 1;
  }
  text += "]}\n";
  write_atomic(file, text);
}

// Streams the file without building a DOM: the table can hold millions of entries.
struct CoefficientReader : nlohmann::json_sax<Json> {
  Json meta;
  std::vector<i128> raw{0};
  int depth = 0;
  std::string top_key;
  std::string meta_key;
  bool in_coeffs = false;

  bool put(Json v) {
    if (depth == 2 && top_key == "meta") meta[meta_key] = std::move(v);
    return true;
  }
  bool null() override { return put(nullptr); }
  bool boolean(bool v) override { return put(v); }
  bool number_integer(number_integer_t v) override { return put(v); }
  bool number_unsigned(number_unsigned_t v) override { return put(v); }
  bool number_float(number_float_t v, const string_t&) override { return put(v); }
  bool binary(binary_t&) override { return false; }
  bool string(string_t& v) override {
    if (in_coeffs) {
      raw.push_back(parse_decimal(v));
      return true;
    }
    return put(v);
  }
  bool start_object(std::size_t) override {
    ++depth;
    return true;
  }
  bool end_object() override {
    --depth;
    return true;
  }
  bool start_array(std::size_t) override {
    ++depth;
    in_coeffs = depth == 2 && top_key == "coefficients";
    return true;
  }
  bool end_array() override {
    --depth;
    in_coeffs = false;
    return true;
  }
  bool key(string_t& k) override {
    if (depth == 1) top_key = k;
    if (depth == 2) meta_key = k;
    return true;
  }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& e) override {
    throw ValidationError(fmt::format("cache parse error at byte {}: {}", pos, e.what()));
  }
};

// The cached table, or nullopt with a reason when it is absent, unreadable or inconsistent.
std::optional<HeckeForm> load_coefficients(const fs::path& file, const std::string& id, std::string& why) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    why = "absent";
    return std::nullopt;
  }
  CoefficientReader reader;
  try {
    Json::sax_parse(in, &reader);
    const auto& m = reader.meta;
    if (m.value("format", "") != kCoeffFormat || m.value("version", 0) != kCacheVersion) {
      why = "unknown format";
      return std::nullopt;
    }
    if (m.value("form_id", "") != id) {
      why = "form id mismatch";
      return std::nullopt;
    }
    const std::size_t N = m.value("n_max", std::size_t{0});
    if (reader.raw.size() != N + 1) {
      why = fmt::format("{} coefficients for n_max = {}", reader.raw.size() - 1, N);
      return std::nullopt;
    }
    std::string payload;
    for (std::size_t n = 1; n <= N; ++n) {
      payload += to_decimal(reader.raw[n]);
      payload += '\n';
    }
    if (sha256_hex(payload) != m.value("sha256", "")) {
      why = "checksum mismatch";
      return std::nullopt;
    }
    return HeckeForm(m.value("weight", 0), m.value("level", 0), std::move(reader.raw), m.value("root_number", 0),
                     FormSource{"delta", "", ""});
  } catch (const std::exception& e) {
    why = e.what();
    return std::nullopt;
  }
}

std::string dlog_payload(const CharacterTable& t) {
  std::string s;
  for (std::uint64_t a = 1; a < t.modulus(); ++a) {
    s += std::to_string(t.dlog(a));
    s += '\n';
  }
  return s;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  out += '\n';
  return out;
}

const char* to_string(CacheOutcome o) {
  switch (o) {
    case CacheOutcome::Hit:
      return "hit";
    case CacheOutcome::Miss:
      return "miss";
    case CacheOutcome::Extended:
      return "extended";
    case CacheOutcome::Regenerated:
      return "regenerated";
  }
  return "?";
}

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {}

fs::path Cache::coefficient_file(const std::string& form_id) const { return dir_ / ("coeffs-" + form_id + ".json"); }

fs::path Cache::character_file(std::uint64_t q) const { return dir_ / fmt::format("chars-q{}.json", q); }

std::shared_ptr<const HeckeForm> Cache::form(const std::string& descriptor, std::size_t n_max) {
  if (descriptor != "delta") {
    last_ = CacheOutcome::Miss;
    return std::make_shared<const HeckeForm>(resolve_form(descriptor, n_max));
  }
  if (n_max < 1 || n_max > kMaxCoefficients) {
    throw ResourceError(fmt::format("n_max = {} outside [1, {}]", n_max, kMaxCoefficients));
  }
  const std::string id = HeckeForm::delta(1).id();
  const fs::path file = coefficient_file(id);
  std::string why;
  auto cached = load_coefficients(file, id, why);
  if (cached && cached->n_max() >= n_max) {
    spdlog::info("coefficient cache hit: {} (n_max {} >= {})", file.string(), cached->n_max(), n_max);
    last_ = CacheOutcome::Hit;
    if (cached->n_max() == n_max) return std::make_shared<const HeckeForm>(std::move(*cached));
    std::vector<i128> raw(n_max + 1);
    for (std::size_t n = 1; n <= n_max; ++n) raw[n] = cached->raw(n);
    return std::make_shared<const HeckeForm>(cached->weight(), cached->level(), std::move(raw), cached->root_number(),
                                             cached->source());
  }
  if (cached) {
    spdlog::info("coefficient cache extended from n_max {} to {}", cached->n_max(), n_max);
    last_ = CacheOutcome::Extended;
  } else if (why == "absent") {
    spdlog::info("coefficient cache miss: {}", file.string());
    last_ = CacheOutcome::Miss;
  } else {
    spdlog::warn("coefficient cache {} rejected ({}); regenerating", file.string(), why);
    last_ = CacheOutcome::Regenerated;
  }
  auto form = std::make_shared<const HeckeForm>(HeckeForm::delta(n_max));
  store_coefficients(file, *form);
  return form;
}

std::shared_ptr<const CharacterTable> Cache::characters(std::uint64_t q) {
  auto table = CharacterTable::build(q);
  const std::string digest = sha256_hex(dlog_payload(*table));
  const fs::path file = character_file(q);
  std::string why = "absent";
  if (std::ifstream in(file); in) {
    try {
      Json m = Json::parse(in);
      if (m.value("format", "") == kCharFormat && m.value("q", std::uint64_t{0}) == q &&
          m.value("generator", std::uint64_t{0}) == table->generator() && m.value("sha256", "") == digest) {
        spdlog::info("character table cache hit: {}", file.string());
        last_ = CacheOutcome::Hit;
        return table;
      }
      why = "checksum mismatch";
    } catch (const std::exception& e) {
      why = e.what();
    }
  }
  if (why == "absent") {
    last_ = CacheOutcome::Miss;
  } else {
    spdlog::warn("character table cache {} rejected ({}); rewriting", file.string(), why);
    last_ = CacheOutcome::Regenerated;
  }
  Json m;
  m["format"] = kCharFormat;
  m["version"] = kCacheVersion;
  m["q"] = q;
  m["generator"] = table->generator();
  m["sha256"] = digest;
  write_atomic(file, m.dump(2) + "\n");
  return table;
}

}  // namespace twistarg
