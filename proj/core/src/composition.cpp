#include "sscomp/composition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "sscomp/errors.hpp"

namespace sscomp {

namespace {

std::vector<int> parse_parts(std::string_view text) {
  std::vector<int> parts;
  if (text.empty()) throw ParseError("empty composition");
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - start);
    if (token.empty() || token.size() > 9 ||
        !std::all_of(token.begin(), token.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw ParseError("malformed part '" + std::string(token) + "' in '" + std::string(text) + "'");
    int v = std::stoi(std::string(token));
    if (v <= 0) throw ParseError("zero part in '" + std::string(text) + "'");
    parts.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::string join(std::span<const int> parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts[i]);
  }
  return s;
}

}  // namespace

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw ParameterError("composition needs at least one part");
  for (int p : parts_) {
    if (p <= 0) throw ParameterError("composition parts must be positive");
    n_ += p;
  }
}

Composition Composition::parse(std::string_view text) { return Composition(parse_parts(text)); }

Composition Composition::from_binary(std::string_view bits) {
  if (bits.empty()) throw ParseError("empty binary code");
  if (bits[0] != '1') throw ParseError("binary code must start with 1: '" + std::string(bits) + "'");
  std::vector<int> parts;
  for (char ch : bits) {
    if (ch == '1') {
      parts.push_back(1);
    } else if (ch == '0') {
      ++parts.back();
    } else {
      throw ParseError("binary code has a non-binary digit: '" + std::string(bits) + "'");
    }
  }
  return Composition(std::move(parts));
}

Composition Composition::from_index(int n, std::uint64_t index) {
  if (n < 1 || n > 63) throw ParameterError("from_index needs 1 <= n <= 63");
  if (n < 64 && (index >> (n - 1)) != 0) throw ParameterError("index out of range for n");
  std::vector<int> parts{1};
  for (int i = n - 2; i >= 0; --i) {
    if ((index >> i) & 1U) {
      parts.push_back(1);
    } else {
      ++parts.back();
    }
  }
  return Composition(std::move(parts));
}

std::vector<int> Composition::partial_sums() const {
  std::vector<int> sums(parts_.size());
  std::partial_sum(parts_.begin(), parts_.end(), sums.begin());
  return sums;
}

std::string Composition::to_binary() const {
  std::string bits;
  bits.reserve(static_cast<std::size_t>(n_));
  for (int p : parts_) {
    bits += '1';
    bits.append(static_cast<std::size_t>(p - 1), '0');
  }
  return bits;
}

std::string Composition::to_string() const { return join(parts_); }

std::uint64_t Composition::index() const {
  std::uint64_t code = 0;
  bool first = true;
  for (int p : parts_) {
    for (int b = 0; b < p; ++b) {
      if (first) {
        first = false;
        continue;
      }
      code = (code << 1) | (b == 0 ? 1U : 0U);
    }
  }
  return code;
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw ParameterError("partition needs at least one part");
  for (int p : parts_) {
    if (p <= 0) throw ParameterError("partition parts must be positive");
    n_ += p;
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

Partition Partition::parse(std::string_view text) { return Partition(parse_parts(text)); }

std::string Partition::to_string() const { return join(parts_); }

Partition Partition::without(int part) const {
  auto it = std::find(parts_.begin(), parts_.end(), part);
  if (it == parts_.end()) throw ParameterError("part " + std::to_string(part) + " not in partition");
  std::vector<int> rest(parts_.begin(), it);
  rest.insert(rest.end(), std::next(it), parts_.end());
  Partition p;
  p.parts_ = std::move(rest);
  p.n_ = n_ - part;
  return p;
}

std::vector<int> Partition::distinct_parts() const {
  std::vector<int> d(parts_.begin(), parts_.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

Composition reverse(const Composition& c) {
  if (c.empty()) return c;
  std::vector<int> parts(c.parts().rbegin(), c.parts().rend());
  return Composition(std::move(parts));
}

Partition rank(const Composition& c) {
  return Partition(std::vector<int>(c.parts().begin(), c.parts().end()));
}

Composition delete_ball(const Composition& c, BallPosition pos) {
  if (pos.index < 1 || pos.index > c.size())
    throw ParameterError("ball position " + std::to_string(pos.index) + " outside [1, " +
                         std::to_string(c.size()) + "]");
  std::vector<int> parts(c.parts().begin(), c.parts().end());
  int seen = 0;
  for (auto it = parts.begin(); it != parts.end(); ++it) {
    seen += *it;
    if (pos.index <= seen) {
      if (--*it == 0) parts.erase(it);
      break;
    }
  }
  if (parts.empty()) return Composition{};
  return Composition(std::move(parts));
}

std::vector<Composition> enumerate_compositions(int n, int cap) {
  if (n < 1) throw ParameterError("enumerate_compositions needs n >= 1");
  if (n > cap)
    throw CapExceeded("n = " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap));
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::vector<Composition> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(Composition::from_index(n, i));
  return out;
}

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1) throw ParameterError("enumerate_partitions needs n >= 1");
  std::vector<Partition> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      current.push_back(p);
      rec(remaining - p, p);
      current.pop_back();
    }
  };
  rec(n, n);
  return out;
}

std::vector<Composition> distinct_arrangements(const Partition& p) {
  std::vector<int> parts(p.parts().begin(), p.parts().end());
  std::sort(parts.begin(), parts.end());
  std::vector<Composition> out;
  do {
    out.emplace_back(parts);
  } while (std::next_permutation(parts.begin(), parts.end()));
  return out;
}

template <class S>
S uniform_reduction_kernel(const Composition& mu, const Composition& lambda) {
  if (mu.size() != lambda.size() + 1)
    throw ParameterError("kernel needs |mu| = |lambda| + 1");
  int hits = 0;
  for (int pos = 1; pos <= mu.size(); ++pos)
    if (delete_ball(mu, BallPosition{pos}) == lambda) ++hits;
  return S(hits) / S(mu.size());
}

template Rational uniform_reduction_kernel<Rational>(const Composition&, const Composition&);
template double uniform_reduction_kernel<double>(const Composition&, const Composition&);

}  // namespace sscomp
