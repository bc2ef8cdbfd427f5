#pragma once

// Content hashing for variable-length values: SHA1 digests of a canonical
// big-endian serialization, and a bidirectional digest <-> value store with
// an optional append-only log.

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cycpp/error.hpp"
#include "cycpp/type_system.hpp"

namespace cycpp {

struct Digest160 {
  std::array<std::uint8_t, 20> bytes{};

  /// Lowercase hex.
  std::string hex() const;
  static Digest160 from_hex(std::string_view hex);

  friend bool operator==(const Digest160&, const Digest160&) = default;
  friend auto operator<=>(const Digest160&, const Digest160&) = default;
};

/// Incremental SHA1 (RFC 3174).
class Sha1 {
 public:
  Sha1();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  Digest160 finish();

 private:
  void block(const std::uint8_t* p);

  std::array<std::uint32_t, 5> h_;
  std::array<std::uint8_t, 64> buf_{};
  std::size_t buf_len_ = 0;
  std::uint64_t total_ = 0;
};

Digest160 sha1(std::string_view bytes);

using DigestWords = std::array<std::uint32_t, 5>;

/// Five big-endian 32-bit words.
DigestWords chop(const Digest160& d);
Digest160 reassemble(const DigestWords& words);

struct Blob {
  std::string bytes;
  friend bool operator==(const Blob&, const Blob&) = default;
};

struct Uuid {
  std::array<std::uint8_t, 16> bytes{};
  friend bool operator==(const Uuid&, const Uuid&) = default;
};

class Value;
using ValueList = std::vector<Value>;                     // vector, set, list, pair
using ValuePairs = std::vector<std::pair<Value, Value>>;  // map entries

/// A value of one of the registered database types. The type it belongs to is
/// always supplied alongside; a Value alone does not say whether a list is a
/// vector or a set.
class Value {
 public:
  using Storage = std::variant<bool, std::int32_t, float, double, std::string, Blob, Uuid,
                               ValueList, ValuePairs>;

  Value() : v_(false) {}
  Value(bool b) : v_(b) {}
  Value(std::int32_t i) : v_(i) {}
  Value(float f) : v_(f) {}
  Value(double d) : v_(d) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(Blob b) : v_(std::move(b)) {}
  Value(Uuid u) : v_(u) {}
  Value(ValueList l) : v_(std::move(l)) {}
  Value(ValuePairs p) : v_(std::move(p)) {}

  const Storage& storage() const { return v_; }
  template <class T>
  const T& get() const { return std::get<T>(v_); }
  template <class T>
  bool holds() const { return std::holds_alternative<T>(v_); }

  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

 private:
  Storage v_;
};

/// Canonical bytes: base type id (u32 BE) followed by the payload. Sets are
/// sorted and deduplicated and maps key-sorted, so equal values serialize
/// identically. Errors: TypeMismatch, UnregisteredType.
std::string serialize(const CanonicalType& t, const Value& v);

/// Inverse of serialize. Errors: CorruptStore.
std::pair<CanonicalType, Value> deserialize(std::string_view bytes);

Digest160 hash_value(const CanonicalType& t, const Value& v);

/// Bidirectional digest <-> value map. Every distinct value is stored once.
/// Readers may run concurrently; writes take an exclusive lock.
class VlStore {
 public:
  VlStore();
  /// Opens (creating if needed) an append-only log and replays it.
  /// Errors: IoError, CorruptStore.
  explicit VlStore(const std::filesystem::path& log_path);
  ~VlStore();

  VlStore(const VlStore&) = delete;
  VlStore& operator=(const VlStore&) = delete;

  Digest160 insert(const CanonicalType& t, const Value& v);
  /// Errors: KeyNotFound.
  Value get_by_key(const Digest160& key) const;
  std::pair<CanonicalType, Value> get_typed(const Digest160& key) const;
  bool contains_key(const Digest160& key) const;
  bool contains_value(const CanonicalType& t, const Value& v) const;
  std::size_t size() const;

 private:
  void replay();

  mutable std::shared_mutex mu_;
  std::map<Digest160, std::string> records_;
  std::filesystem::path log_path_;
  std::unique_ptr<std::ofstream> log_;
};

/// Table names the simulation kernel already uses.
const std::vector<std::string>& reserved_table_names();
bool is_reserved_table_name(std::string_view name);

}  // namespace cycpp
