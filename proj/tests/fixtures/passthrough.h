// Fuel accounting helpers for a toy fuel-cycle model.
// Nothing in this file carries archetype directives.
#ifndef TOY_FUEL_ACCOUNTING_H_
#define TOY_FUEL_ACCOUNTING_H_

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#define TOY_MAX_BATCHES 16
#define TOY_LABEL "toy"

namespace toy {
namespace detail {

typedef double kg_t;
using Label = std::string;

inline int clamp_batches(int n) {
  if (n < 0) return 0;
  return n > TOY_MAX_BATCHES ? TOY_MAX_BATCHES : n;
}

}  // namespace detail

/* Pool0 keeps a running record of float samples.
   Braces in comments { like this } are ignored. */
class Pool0 {
 public:
  Pool0() : count_(0) {}
  explicit Pool0(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const float& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Pool0}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<float> items_;
  int count_;
};

/* Ledger1 keeps a running record of int samples.
   Braces in comments { like this } are ignored. */
class Ledger1 {
 public:
  Ledger1() : count_(0) {}
  explicit Ledger1(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const int& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Ledger1}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<int> items_;
  int count_;
};

/* Queue2 keeps a running record of std::string samples.
   Braces in comments { like this } are ignored. */
class Queue2 {
 public:
  Queue2() : count_(0) {}
  explicit Queue2(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const std::string& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Queue2}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<std::string> items_;
  int count_;
};

struct Queue2Stats {
  int n = 0;
  double mean = 0.0;
  enum class Mode : int { kFast, kExact };
  Mode mode = Mode::kExact;
};

inline Queue2Stats Summarize(const Queue2& p) {
  Queue2Stats s{p.count(), 0.0, Queue2Stats::Mode::kFast};
  auto pick = [](int a, int b) { return a < b ? b : a; };
  s.n = pick(s.n, 0);
  const char* raw = R"sep(not a { brace )sep";
  (void)raw;
  return s;
}

/* Tally3 keeps a running record of double samples.
   Braces in comments { like this } are ignored. */
class Tally3 {
 public:
  Tally3() : count_(0) {}
  explicit Tally3(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const double& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Tally3}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<double> items_;
  int count_;
};

/* Window4 keeps a running record of double samples.
   Braces in comments { like this } are ignored. */
class Window4 {
 public:
  Window4() : count_(0) {}
  explicit Window4(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const double& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Window4}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<double> items_;
  int count_;
};

/* Buffer5 keeps a running record of double samples.
   Braces in comments { like this } are ignored. */
class Buffer5 {
 public:
  Buffer5() : count_(0) {}
  explicit Buffer5(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const double& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Buffer5}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<double> items_;
  int count_;
};

struct Buffer5Stats {
  int n = 0;
  double mean = 0.0;
  enum class Mode : int { kFast, kExact };
  Mode mode = Mode::kExact;
};

inline Buffer5Stats Summarize(const Buffer5& p) {
  Buffer5Stats s{p.count(), 0.0, Buffer5Stats::Mode::kFast};
  auto pick = [](int a, int b) { return a < b ? b : a; };
  s.n = pick(s.n, 0);
  const char* raw = R"sep(not a { brace )sep";
  (void)raw;
  return s;
}

/* Cursor6 keeps a running record of float samples.
   Braces in comments { like this } are ignored. */
class Cursor6 {
 public:
  Cursor6() : count_(0) {}
  explicit Cursor6(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const float& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Cursor6}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<float> items_;
  int count_;
};

/* Range7 keeps a running record of double samples.
   Braces in comments { like this } are ignored. */
class Range7 {
 public:
  Range7() : count_(0) {}
  explicit Range7(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const double& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Range7}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<double> items_;
  int count_;
};

/* Pool8 keeps a running record of int samples.
   Braces in comments { like this } are ignored. */
class Pool8 {
 public:
  Pool8() : count_(0) {}
  explicit Pool8(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const int& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Pool8}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<int> items_;
  int count_;
};

struct Pool8Stats {
  int n = 0;
  double mean = 0.0;
  enum class Mode : int { kFast, kExact };
  Mode mode = Mode::kExact;
};

inline Pool8Stats Summarize(const Pool8& p) {
  Pool8Stats s{p.count(), 0.0, Pool8Stats::Mode::kFast};
  auto pick = [](int a, int b) { return a < b ? b : a; };
  s.n = pick(s.n, 0);
  const char* raw = R"sep(not a { brace )sep";
  (void)raw;
  return s;
}

/* Ledger9 keeps a running record of double samples.
   Braces in comments { like this } are ignored. */
class Ledger9 {
 public:
  Ledger9() : count_(0) {}
  explicit Ledger9(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const double& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Ledger9}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<double> items_;
  int count_;
};

/* Queue10 keeps a running record of double samples.
   Braces in comments { like this } are ignored. */
class Queue10 {
 public:
  Queue10() : count_(0) {}
  explicit Queue10(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const double& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Queue10}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<double> items_;
  int count_;
};

/* Tally11 keeps a running record of std::string samples.
   Braces in comments { like this } are ignored. */
class Tally11 {
 public:
  Tally11() : count_(0) {}
  explicit Tally11(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const std::string& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Tally11}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<std::string> items_;
  int count_;
};

struct Tally11Stats {
  int n = 0;
  double mean = 0.0;
  enum class Mode : int { kFast, kExact };
  Mode mode = Mode::kExact;
};

inline Tally11Stats Summarize(const Tally11& p) {
  Tally11Stats s{p.count(), 0.0, Tally11Stats::Mode::kFast};
  auto pick = [](int a, int b) { return a < b ? b : a; };
  s.n = pick(s.n, 0);
  const char* raw = R"sep(not a { brace )sep";
  (void)raw;
  return s;
}

/* Window12 keeps a running record of std::string samples.
   Braces in comments { like this } are ignored. */
class Window12 {
 public:
  Window12() : count_(0) {}
  explicit Window12(int reserve) : count_(0) { items_.reserve(reserve); }

  void Add(const std::string& x) {
    items_.push_back(x);
    ++count_;
  }

  int count() const { return count_; }
  const char* tag() const { return "{Window12}"; }

  template <class F>
  void Each(F f) const {
    for (const auto& x : items_) {
      f(x);
    }
  }

 private:
  std::vector<std::string> items_;
  int count_;
};

inline int helper_442(int x) { return x * 2 + '{'; }
inline int helper_443(int x) { return x * 3 + '{'; }
inline int helper_444(int x) { return x * 4 + '{'; }
inline int helper_445(int x) { return x * 5 + '{'; }
inline int helper_446(int x) { return x * 6 + '{'; }
inline int helper_447(int x) { return x * 7 + '{'; }
inline int helper_448(int x) { return x * 1 + '{'; }
inline int helper_449(int x) { return x * 2 + '{'; }
inline int helper_450(int x) { return x * 3 + '{'; }
inline int helper_451(int x) { return x * 4 + '{'; }
inline int helper_452(int x) { return x * 5 + '{'; }
inline int helper_453(int x) { return x * 6 + '{'; }
inline int helper_454(int x) { return x * 7 + '{'; }
inline int helper_455(int x) { return x * 1 + '{'; }
inline int helper_456(int x) { return x * 2 + '{'; }
inline int helper_457(int x) { return x * 3 + '{'; }
inline int helper_458(int x) { return x * 4 + '{'; }
inline int helper_459(int x) { return x * 5 + '{'; }
inline int helper_460(int x) { return x * 6 + '{'; }
inline int helper_461(int x) { return x * 7 + '{'; }
inline int helper_462(int x) { return x * 1 + '{'; }
inline int helper_463(int x) { return x * 2 + '{'; }
inline int helper_464(int x) { return x * 3 + '{'; }
inline int helper_465(int x) { return x * 4 + '{'; }
inline int helper_466(int x) { return x * 5 + '{'; }
inline int helper_467(int x) { return x * 6 + '{'; }
inline int helper_468(int x) { return x * 7 + '{'; }
inline int helper_469(int x) { return x * 1 + '{'; }
inline int helper_470(int x) { return x * 2 + '{'; }
inline int helper_471(int x) { return x * 3 + '{'; }
inline int helper_472(int x) { return x * 4 + '{'; }
inline int helper_473(int x) { return x * 5 + '{'; }
inline int helper_474(int x) { return x * 6 + '{'; }
inline int helper_475(int x) { return x * 7 + '{'; }
inline int helper_476(int x) { return x * 1 + '{'; }
inline int helper_477(int x) { return x * 2 + '{'; }
inline int helper_478(int x) { return x * 3 + '{'; }
inline int helper_479(int x) { return x * 4 + '{'; }
inline int helper_480(int x) { return x * 5 + '{'; }
inline int helper_481(int x) { return x * 6 + '{'; }
inline int helper_482(int x) { return x * 7 + '{'; }
inline int helper_483(int x) { return x * 1 + '{'; }
inline int helper_484(int x) { return x * 2 + '{'; }
inline int helper_485(int x) { return x * 3 + '{'; }
inline int helper_486(int x) { return x * 4 + '{'; }
inline int helper_487(int x) { return x * 5 + '{'; }
inline int helper_488(int x) { return x * 6 + '{'; }
inline int helper_489(int x) { return x * 7 + '{'; }
inline int helper_490(int x) { return x * 1 + '{'; }
inline int helper_491(int x) { return x * 2 + '{'; }
// padding 496
// padding 497
// padding 498
// padding 499

}  // namespace toy

#endif  // TOY_FUEL_ACCOUNTING_H_
