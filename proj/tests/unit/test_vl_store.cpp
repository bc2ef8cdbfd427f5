#include <gtest/gtest.h>

#include <openssl/sha.h>

#include <fstream>
#include <random>
#include <thread>

#include "cycpp/vl_store.hpp"
#include "support.hpp"

using namespace cycpp;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

std::string openssl_hex(const std::string& data) {
  unsigned char out[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(data.data()), data.size(), out);
  static const char* digits = "0123456789abcdef";
  std::string hex;
  for (unsigned char c : out) {
    hex += digits[c >> 4];
    hex += digits[c & 15];
  }
  return hex;
}

CanonicalType T(const char* text) { return canonicalize(text); }

}  // namespace

TEST(Sha1, Rfc3174Vectors) {
  EXPECT_EQ(sha1("abc").hex(), "a9993e364706816aba3e25717850c26c9cd0d89d");
  EXPECT_EQ(sha1("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq").hex(),
            "84983e441c3bd26ebaae4aa1f95129e5e54670f1");
  EXPECT_EQ(sha1(std::string(1000000, 'a')).hex(), "34aa973cd4c4daa4f61eeb2bdbad27316534016f");
  std::string rep;
  for (int i = 0; i < 10; ++i) {
    rep += "0123456701234567012345670123456701234567012345670123456701234567";
  }
  EXPECT_EQ(sha1(rep).hex(), "dea356a2cddd90c7a7ecedc5ebb563934f460452");
  EXPECT_EQ(sha1("").hex(), "da39a3ee5e6b4b0d3255bfef95601890afd80709");
}

TEST(Sha1, AgreesWithOpenSsl) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3000; ++i) {
    std::string data(rng() % 300, '\0');
    for (auto& c : data) c = static_cast<char>(rng());
    ASSERT_EQ(sha1(data).hex(), openssl_hex(data)) << "length " << data.size();
  }
}

TEST(Sha1, IncrementalEqualsOneShot) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    std::string data(rng() % 500, '\0');
    for (auto& c : data) c = static_cast<char>(rng());
    Sha1 h;
    std::size_t pos = 0;
    while (pos < data.size()) {
      std::size_t n = std::min<std::size_t>(rng() % 70, data.size() - pos);
      h.update(data.data() + pos, n);
      pos += n;
    }
    EXPECT_EQ(h.finish(), sha1(data));
  }
}

TEST(Digest, HexRoundTrip) {
  auto d = sha1("abc");
  EXPECT_EQ(Digest160::from_hex(d.hex()), d);
}

TEST(Chop, FiveBigEndianWords) {
  auto w = chop(sha1("abc"));
  EXPECT_EQ(w[0], 0xa9993e36u);
  EXPECT_EQ(w[4], 0x9cd0d89du);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    Digest160 d;
    for (auto& b : d.bytes) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(reassemble(chop(d)), d);
  }
}

TEST(Serialize, RoundTripsEveryShape) {
  std::vector<std::pair<CanonicalType, Value>> cases = {
      {T("bool"), Value(true)},
      {T("int"), Value(std::int32_t{-7})},
      {T("float"), Value(1.5f)},
      {T("double"), Value(-0.0)},
      {T("std::string"), Value("h\xc3\xa9llo")},
      {T("cyclus::Blob"), Value(Blob{std::string("\0\1\2", 3)})},
      {T("boost::uuids::uuid"), Value(Uuid{})},
      {T("std::vector<int>"), Value(ValueList{std::int32_t{3}, std::int32_t{1}})},
      {T("std::set<std::string>"), Value(ValueList{"a", "b"})},
      {T("std::list<double>"), Value(ValueList{1.0, 2.0})},
      {T("std::pair<int, std::string>"), Value(ValueList{std::int32_t{1}, "x"})},
      {T("std::map<std::string, int>"),
       Value(ValuePairs{{"a", std::int32_t{1}}, {"b", std::int32_t{2}}})},
  };
  for (const auto& [t, v] : cases) {
    auto bytes = serialize(t, v);
    auto [t2, v2] = deserialize(bytes);
    EXPECT_EQ(t2, t) << t.cpp();
    EXPECT_EQ(v2, v) << t.cpp();
  }
}

TEST(Serialize, TypeIdPrefixIsBigEndian) {
  auto bytes = serialize(T("std::vector<int>"), Value(ValueList{}));
  ASSERT_GE(bytes.size(), 4u);
  EXPECT_EQ(bytes.substr(0, 4), std::string("\0\0\0\x0a", 4));
}

TEST(Serialize, SetsAndMapsAreCanonical) {
  auto s1 = serialize(T("std::set<int>"), Value(ValueList{std::int32_t{3}, std::int32_t{1}}));
  auto s2 = serialize(T("std::set<int>"),
                      Value(ValueList{std::int32_t{1}, std::int32_t{3}, std::int32_t{3}}));
  EXPECT_EQ(s1, s2);
  auto m1 = serialize(T("std::map<std::string, int>"),
                      Value(ValuePairs{{"b", std::int32_t{2}}, {"a", std::int32_t{1}}}));
  auto m2 = serialize(T("std::map<std::string, int>"),
                      Value(ValuePairs{{"a", std::int32_t{1}}, {"b", std::int32_t{2}}}));
  EXPECT_EQ(m1, m2);
  auto v1 = serialize(T("std::vector<int>"), Value(ValueList{std::int32_t{3}, std::int32_t{1}}));
  auto v2 = serialize(T("std::vector<int>"), Value(ValueList{std::int32_t{1}, std::int32_t{3}}));
  EXPECT_NE(v1, v2);
}

TEST(Serialize, Errors) {
  EXPECT_EQ(kind_of([] { serialize(T("int"), Value("x")); }), ErrorKind::TypeMismatch);
  EXPECT_EQ(kind_of([] { serialize(T("std::pair<int, int>"), Value(ValueList{std::int32_t{1}})); }),
            ErrorKind::TypeMismatch);
  EXPECT_EQ(kind_of([] { deserialize(std::string("\0\0\0\x01\0", 5)); }), ErrorKind::CorruptStore);
  EXPECT_EQ(kind_of([] { deserialize(std::string("\xff\xff\xff\xff", 4)); }),
            ErrorKind::CorruptStore);
}

TEST(Store, InsertIsIdempotentAndBidirectional) {
  VlStore store;
  auto k1 = store.insert(T("std::string"), Value("abc"));
  auto k2 = store.insert(T("std::string"), Value("abc"));
  auto k3 = store.insert(T("std::string"), Value("abd"));
  EXPECT_EQ(k1, k2);
  EXPECT_NE(k1, k3);
  EXPECT_EQ(store.size(), 2u);
  EXPECT_EQ(store.get_by_key(k1), Value("abc"));
  EXPECT_EQ(store.get_typed(k3).first, T("std::string"));
  EXPECT_TRUE(store.contains_key(k1));
  EXPECT_TRUE(store.contains_value(T("std::string"), Value("abd")));
  EXPECT_FALSE(store.contains_value(T("std::string"), Value("zzz")));
  EXPECT_EQ(k1, hash_value(T("std::string"), Value("abc")));
  EXPECT_EQ(kind_of([&] { store.get_by_key(sha1("nothing")); }), ErrorKind::KeyNotFound);
}

TEST(Store, SameBytesDifferentTypesDiffer) {
  VlStore store;
  auto a = store.insert(T("std::vector<int>"), Value(ValueList{std::int32_t{1}}));
  auto b = store.insert(T("std::list<int>"), Value(ValueList{std::int32_t{1}}));
  EXPECT_NE(a, b);
}

TEST(Store, LogReplay) {
  testsupport::TempDir tmp;
  auto path = tmp.path / "store.log";
  std::vector<Digest160> keys;
  {
    VlStore store(path);
    for (int i = 0; i < 100; ++i) {
      keys.push_back(store.insert(T("std::vector<int>"), Value(ValueList{std::int32_t{i}})));
    }
    store.insert(T("std::vector<int>"), Value(ValueList{std::int32_t{0}}));
  }
  VlStore again(path);
  EXPECT_EQ(again.size(), 100u);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(again.get_by_key(keys[static_cast<std::size_t>(i)]),
              Value(ValueList{std::int32_t{i}}));
  }
}

TEST(Store, CorruptLogIsDetected) {
  testsupport::TempDir tmp;
  auto path = tmp.path / "store.log";
  {
    VlStore store(path);
    store.insert(T("std::string"), Value("payload"));
  }
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  ASSERT_FALSE(bytes.empty());
  bytes[bytes.size() - 1] ^= 0x20;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  EXPECT_EQ(kind_of([&] { VlStore bad(path); }), ErrorKind::CorruptStore);
}

TEST(Store, ConcurrentReadersAndWriters) {
  VlStore store;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&store, t] {
      for (int i = 0; i < 500; ++i) {
        auto k = store.insert(canonicalize("std::string"), Value(std::to_string(i % 250)));
        EXPECT_EQ(store.get_by_key(k), Value(std::to_string(i % 250)));
        (void)t;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store.size(), 250u);
}

TEST(TableNames, Reserved) {
  EXPECT_TRUE(is_reserved_table_name("Resources"));
  EXPECT_TRUE(is_reserved_table_name("Info"));
  EXPECT_FALSE(is_reserved_table_name("ReactorState"));
  EXPECT_FALSE(reserved_table_names().empty());
}
