#include "cycpp/vl_store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <mutex>

namespace cycpp {

// ---------------------------------------------------------------------------
// Digest and SHA1

std::string Digest160::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(40);
  for (auto b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

Digest160 Digest160::from_hex(std::string_view hex) {
  if (hex.size() != 40) {
    throw Error(ErrorKind::SyntaxError, "digest must be 40 hex digits, got " +
                                            std::to_string(hex.size()));
  }
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw Error(ErrorKind::SyntaxError, "bad hex digit '" + std::string(1, c) + "'");
  };
  Digest160 d;
  for (std::size_t i = 0; i < 20; ++i) {
    d.bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return d;
}

Sha1::Sha1() : h_{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u} {}

void Sha1::block(const std::uint8_t* p) {
  std::uint32_t w[80];
  for (int t = 0; t < 16; ++t) {
    w[t] = std::uint32_t(p[4 * t]) << 24 | std::uint32_t(p[4 * t + 1]) << 16 |
           std::uint32_t(p[4 * t + 2]) << 8 | std::uint32_t(p[4 * t + 3]);
  }
  for (int t = 16; t < 80; ++t) w[t] = std::rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);

  std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
  for (int t = 0; t < 80; ++t) {
    std::uint32_t f, k;
    if (t < 20) {
      f = (b & c) | (~b & d);
      k = 0x5A827999u;
    } else if (t < 40) {
      f = b ^ c ^ d;
      k = 0x6ED9EBA1u;
    } else if (t < 60) {
      f = (b & c) | (b & d) | (c & d);
      k = 0x8F1BBCDCu;
    } else {
      f = b ^ c ^ d;
      k = 0xCA62C1D6u;
    }
    std::uint32_t tmp = std::rotl(a, 5) + f + e + k + w[t];
    e = d;
    d = c;
    c = std::rotl(b, 30);
    b = a;
    a = tmp;
  }
  h_[0] += a;
  h_[1] += b;
  h_[2] += c;
  h_[3] += d;
  h_[4] += e;
}

void Sha1::update(const void* data, std::size_t len) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  total_ += len;
  if (buf_len_) {
    std::size_t take = std::min(len, 64 - buf_len_);
    std::memcpy(buf_.data() + buf_len_, p, take);
    buf_len_ += take;
    p += take;
    len -= take;
    if (buf_len_ == 64) {
      block(buf_.data());
      buf_len_ = 0;
    }
  }
  while (len >= 64) {
    block(p);
    p += 64;
    len -= 64;
  }
  if (len) {
    std::memcpy(buf_.data(), p, len);
    buf_len_ = len;
  }
}

Digest160 Sha1::finish() {
  std::uint64_t bits = total_ * 8;
  std::uint8_t pad = 0x80;
  update(&pad, 1);
  std::uint8_t zero = 0;
  while (buf_len_ != 56) update(&zero, 1);
  std::uint8_t len_be[8];
  for (int i = 0; i < 8; ++i) len_be[i] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
  update(len_be, 8);
  Digest160 d;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      d.bytes[4 * i + j] = static_cast<std::uint8_t>(h_[i] >> (24 - 8 * j));
    }
  }
  *this = Sha1();
  return d;
}

Digest160 sha1(std::string_view bytes) {
  Sha1 h;
  h.update(bytes);
  return h.finish();
}

DigestWords chop(const Digest160& d) {
  DigestWords w{};
  for (int i = 0; i < 5; ++i) {
    w[i] = std::uint32_t(d.bytes[4 * i]) << 24 | std::uint32_t(d.bytes[4 * i + 1]) << 16 |
           std::uint32_t(d.bytes[4 * i + 2]) << 8 | std::uint32_t(d.bytes[4 * i + 3]);
  }
  return w;
}

Digest160 reassemble(const DigestWords& words) {
  Digest160 d;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      d.bytes[4 * i + j] = static_cast<std::uint8_t>(words[i] >> (24 - 8 * j));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Canonical serialization

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

[[noreturn]] void mismatch(const CanonicalType& t, const char* got) {
  throw Error(ErrorKind::TypeMismatch,
              "value of kind " + std::string(got) + " does not conform to '" + t.cpp() + "'");
}

const char* kind_of(const Value& v) {
  static const char* names[] = {"bool", "int", "float", "double", "string",
                                "blob", "uuid", "list", "pairs"};
  return names[v.storage().index()];
}

void payload(const CanonicalType& t, const Value& v, std::string& out);

void put_count(std::string& out, std::size_t n, const CanonicalType& t) {
  if (n > 0xFFFFFFFFull) mismatch(t, "oversized container");
  put_u32(out, static_cast<std::uint32_t>(n));
}

void payload(const CanonicalType& t, const Value& v, std::string& out) {
  const std::string& n = t.name;
  if (n == "bool") {
    if (!v.holds<bool>()) mismatch(t, kind_of(v));
    out += static_cast<char>(v.get<bool>() ? 1 : 0);
  } else if (n == "int") {
    if (!v.holds<std::int32_t>()) mismatch(t, kind_of(v));
    put_u32(out, static_cast<std::uint32_t>(v.get<std::int32_t>()));
  } else if (n == "float") {
    if (!v.holds<float>()) mismatch(t, kind_of(v));
    put_u32(out, std::bit_cast<std::uint32_t>(v.get<float>()));
  } else if (n == "double") {
    if (!v.holds<double>()) mismatch(t, kind_of(v));
    put_u64(out, std::bit_cast<std::uint64_t>(v.get<double>()));
  } else if (n == "std::string") {
    if (!v.holds<std::string>()) mismatch(t, kind_of(v));
    put_count(out, v.get<std::string>().size(), t);
    out += v.get<std::string>();
  } else if (n == "cyclus::Blob") {
    if (!v.holds<Blob>()) mismatch(t, kind_of(v));
    put_count(out, v.get<Blob>().bytes.size(), t);
    out += v.get<Blob>().bytes;
  } else if (n == "boost::uuids::uuid") {
    if (!v.holds<Uuid>()) mismatch(t, kind_of(v));
    for (auto b : v.get<Uuid>().bytes) out += static_cast<char>(b);
  } else if (n == "std::vector" || n == "std::list") {
    if (!v.holds<ValueList>()) mismatch(t, kind_of(v));
    const auto& items = v.get<ValueList>();
    put_count(out, items.size(), t);
    for (const auto& e : items) payload(t.params[0], e, out);
  } else if (n == "std::set") {
    if (!v.holds<ValueList>()) mismatch(t, kind_of(v));
    std::vector<std::string> encoded;
    for (const auto& e : v.get<ValueList>()) {
      std::string s;
      payload(t.params[0], e, s);
      encoded.push_back(std::move(s));
    }
    std::sort(encoded.begin(), encoded.end());
    encoded.erase(std::unique(encoded.begin(), encoded.end()), encoded.end());
    put_count(out, encoded.size(), t);
    for (const auto& s : encoded) out += s;
  } else if (n == "std::pair") {
    if (!v.holds<ValueList>() || v.get<ValueList>().size() != 2) mismatch(t, kind_of(v));
    payload(t.params[0], v.get<ValueList>()[0], out);
    payload(t.params[1], v.get<ValueList>()[1], out);
  } else if (n == "std::map") {
    if (!v.holds<ValuePairs>()) mismatch(t, kind_of(v));
    std::vector<std::pair<std::string, std::string>> encoded;
    for (const auto& [k, val] : v.get<ValuePairs>()) {
      std::string ks, vs;
      payload(t.params[0], k, ks);
      payload(t.params[1], val, vs);
      encoded.emplace_back(std::move(ks), std::move(vs));
    }
    std::sort(encoded.begin(), encoded.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < encoded.size(); ++i) {
      if (encoded[i].first == encoded[i - 1].first) {
        throw Error(ErrorKind::TypeMismatch, "duplicate key in value for '" + t.cpp() + "'");
      }
    }
    put_count(out, encoded.size(), t);
    for (const auto& [k, val] : encoded) {
      out += k;
      out += val;
    }
  } else {
    throw Error(ErrorKind::UnregisteredType, "type '" + t.cpp() + "' cannot be serialized");
  }
}

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | static_cast<std::uint8_t>(s_[pos_++]);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | static_cast<std::uint8_t>(s_[pos_++]);
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(s_[pos_++]);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string out(s_.substr(pos_, n));
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == s_.size(); }

  Value value(const CanonicalType& t) {
    const std::string& n = t.name;
    if (n == "bool") {
      auto b = u8();
      if (b > 1) fail("bad bool byte");
      return Value(b == 1);
    }
    if (n == "int") return Value(static_cast<std::int32_t>(u32()));
    if (n == "float") return Value(std::bit_cast<float>(u32()));
    if (n == "double") return Value(std::bit_cast<double>(u64()));
    if (n == "std::string") return Value(bytes(u32()));
    if (n == "cyclus::Blob") return Value(Blob{bytes(u32())});
    if (n == "boost::uuids::uuid") {
      Uuid u;
      for (auto& b : u.bytes) b = u8();
      return Value(u);
    }
    if (n == "std::vector" || n == "std::list" || n == "std::set") {
      std::uint32_t count = u32();
      ValueList items;
      for (std::uint32_t i = 0; i < count; ++i) items.push_back(value(t.params[0]));
      return Value(std::move(items));
    }
    if (n == "std::pair") {
      ValueList items;
      items.push_back(value(t.params[0]));
      items.push_back(value(t.params[1]));
      return Value(std::move(items));
    }
    if (n == "std::map") {
      std::uint32_t count = u32();
      ValuePairs items;
      for (std::uint32_t i = 0; i < count; ++i) {
        Value k = value(t.params[0]);
        Value v = value(t.params[1]);
        items.emplace_back(std::move(k), std::move(v));
      }
      return Value(std::move(items));
    }
    fail("unserializable type " + t.cpp());
  }

  [[noreturn]] static void fail(const std::string& why) {
    throw Error(ErrorKind::CorruptStore, "malformed serialized value: " + why);
  }

 private:
  void need(std::size_t n) const {
    if (s_.size() - pos_ < n) fail("truncated");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const CanonicalType& t, const Value& v) {
  const auto& entry = DbTypeTable::builtin().base(t);
  std::string out;
  put_u32(out, static_cast<std::uint32_t>(entry.id));
  payload(t, v, out);
  return out;
}

std::pair<CanonicalType, Value> deserialize(std::string_view bytes) {
  Reader r(bytes);
  int id = static_cast<int>(r.u32());
  CanonicalType t;
  try {
    t = DbTypeTable::builtin().lookup(id).cpp;
  } catch (const Error&) {
    Reader::fail("unknown type id " + std::to_string(id));
  }
  Value v = r.value(t);
  if (!r.done()) Reader::fail("trailing bytes");
  return {std::move(t), std::move(v)};
}

Digest160 hash_value(const CanonicalType& t, const Value& v) { return sha1(serialize(t, v)); }

// ---------------------------------------------------------------------------
// VlStore

VlStore::VlStore() = default;

VlStore::VlStore(const std::filesystem::path& log_path) : log_path_(log_path) {
  replay();
  log_ = std::make_unique<std::ofstream>(log_path_, std::ios::binary | std::ios::app);
  if (!*log_) throw Error(ErrorKind::IoError, "cannot open '" + log_path_.string() + "'");
}

VlStore::~VlStore() = default;

void VlStore::replay() {
  std::ifstream in(log_path_, std::ios::binary);
  if (!in) return;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::size_t record = 0;
  auto corrupt = [&](const std::string& why) {
    throw Error(ErrorKind::CorruptStore, log_path_.string() + ": record " +
                                             std::to_string(record) + ": " + why);
  };
  while (pos < data.size()) {
    if (data.size() - pos < 24) corrupt("truncated header");
    Digest160 key;
    std::memcpy(key.bytes.data(), data.data() + pos, 20);
    pos += 20;
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | static_cast<std::uint8_t>(data[pos++]);
    if (data.size() - pos < len) corrupt("truncated value");
    std::string bytes = data.substr(pos, len);
    pos += len;
    if (sha1(bytes) != key) corrupt("digest mismatch for " + key.hex());
    records_.emplace(key, std::move(bytes));
    ++record;
  }
}

Digest160 VlStore::insert(const CanonicalType& t, const Value& v) {
  std::string bytes = serialize(t, v);
  Digest160 key = sha1(bytes);
  std::unique_lock lock(mu_);
  auto [it, fresh] = records_.emplace(key, bytes);
  if (!fresh) {
    if (it->second != bytes) {
      throw Error(ErrorKind::CorruptStore, "SHA1 collision on " + key.hex());
    }
    return key;
  }
  if (log_) {
    std::string header(key.bytes.begin(), key.bytes.end());
    put_u32(header, static_cast<std::uint32_t>(bytes.size()));
    log_->write(header.data(), static_cast<std::streamsize>(header.size()));
    log_->write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    log_->flush();
    if (!*log_) throw Error(ErrorKind::IoError, "write to '" + log_path_.string() + "' failed");
  }
  return key;
}

std::pair<CanonicalType, Value> VlStore::get_typed(const Digest160& key) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(key);
  if (it == records_.end()) throw Error(ErrorKind::KeyNotFound, "no value with key " + key.hex());
  return deserialize(it->second);
}

Value VlStore::get_by_key(const Digest160& key) const { return get_typed(key).second; }

bool VlStore::contains_key(const Digest160& key) const {
  std::shared_lock lock(mu_);
  return records_.count(key) != 0;
}

bool VlStore::contains_value(const CanonicalType& t, const Value& v) const {
  return contains_key(hash_value(t, v));
}

std::size_t VlStore::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& reserved_table_names() {
  static const std::vector<std::string> names = {
      "Resources",  "Compositions", "Recipes",      "Products",      "ResCreators",
      "AgentEntry", "AgentExit",    "Transactions", "Info",          "Finish",
      "InputFiles", "DecomSchedule", "BuildSchedule", "Snapshots"};
  return names;
}

bool is_reserved_table_name(std::string_view name) {
  const auto& names = reserved_table_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace cycpp
