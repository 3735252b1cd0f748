#include "wolvan/power_sum.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define WOLVAN_HAVE_X86 1
#endif

#include "montgomery.hpp"

namespace wolvan {
namespace {

using detail::Montgomery64;

// Forward difference table of s -> s^E at s0 with step `stride`, all mod m.
template <unsigned E>
std::array<std::uint64_t, E + 1> difference_table(std::uint64_t s0, std::uint64_t stride, const Modulus& m) {
  std::array<std::uint64_t, E + 1> v{};
  for (unsigned j = 0; j <= E; ++j) {
    std::uint64_t s = m.reduce(s0 + j * stride);
    v[j] = powmod(s, E, m);
  }
  // after pass i, v[i..E] hold i-th differences
  for (unsigned i = 1; i <= E; ++i)
    for (unsigned j = E; j >= i; --j) v[j] = m.sub(v[j], v[j - 1]);
  return v;
}

PairAccumulator reference_pair(const Modulus& m, unsigned e, std::uint64_t first, std::uint64_t count,
                               std::uint64_t stride) {
  PairAccumulator acc;
  std::uint64_t s = first;
  for (std::uint64_t i = 0; i < count; ++i, s += stride) {
    Residue x = powmod(m.reduce(s), e, m);
    acc.c1 = m.add(mulmod(acc.c1, x, m), acc.c0);
    acc.c0 = mulmod(acc.c0, x, m);
  }
  return acc;
}

// Splits `count` progression elements into `lanes` contiguous blocks whose
// sizes differ by at most one; the first `count % lanes` blocks get the extra.
struct LaneSplit {
  std::uint64_t base;
  std::uint64_t extra;

  LaneSplit(std::uint64_t count, std::uint64_t lanes) : base(count / lanes), extra(count % lanes) {}

  std::uint64_t start(std::uint64_t lane) const { return lane * base + (lane < extra ? lane : extra); }
  std::uint64_t size(std::uint64_t lane) const { return base + (lane < extra ? 1 : 0); }
};

template <unsigned E>
PairAccumulator montgomery_pair(const Modulus& m, std::uint64_t first, std::uint64_t count, std::uint64_t stride) {
  constexpr std::size_t L = 8;
  const Montgomery64 mg(m.value());
  const LaneSplit split(count, L);

  std::array<std::array<std::uint64_t, E + 1>, L> diff{};
  std::array<std::uint64_t, L> c0{};
  std::array<std::uint64_t, L> c1{};
  for (std::size_t l = 0; l < L; ++l) {
    auto table = difference_table<E>(first + split.start(l) * stride, stride, m);
    for (unsigned i = 0; i <= E; ++i) diff[l][i] = mg.to(table[i]);
    c0[l] = mg.to(1);
    c1[l] = 0;
  }

  auto step = [&](std::size_t l) {
    std::uint64_t x = diff[l][0];
    c1[l] = mg.add(mg.mul(c1[l], x), c0[l]);
    c0[l] = mg.mul(c0[l], x);
    for (unsigned i = 0; i < E; ++i) diff[l][i] = mg.add(diff[l][i], diff[l][i + 1]);
  };

  for (std::uint64_t n = 0; n < split.base; ++n)
    for (std::size_t l = 0; l < L; ++l) step(l);
  for (std::size_t l = 0; l < split.extra; ++l) step(l);

  PairAccumulator acc;
  for (std::size_t l = 0; l < L; ++l) acc = combine(acc, {mg.from(c0[l]), mg.from(c1[l])}, m);
  return acc;
}

#ifdef WOLVAN_HAVE_X86

std::uint64_t redc32(std::uint64_t t, std::uint64_t m, std::uint32_t minv) {
  std::uint32_t q = static_cast<std::uint32_t>(t) * minv;
  std::uint64_t th = t >> 32;
  std::uint64_t uh = (static_cast<std::uint64_t>(q) * m) >> 32;
  return th >= uh ? th - uh : th - uh + m;
}

struct Vec32Context {
  __m512i m;
  __m512i minv;      // m^-1 mod 2^32
  __m512i neg_minv;  // -m^-1 mod 2^32
  __m512i two_m;
};

// Exact Montgomery product, inputs and output in [0, m).
__attribute__((target("avx512f"))) inline __m512i vmul(__m512i a, __m512i b, const Vec32Context& k) {
  __m512i t = _mm512_mul_epu32(a, b);
  __m512i q = _mm512_mul_epu32(t, k.minv);
  __m512i u = _mm512_mul_epu32(q, k.m);
  __m512i th = _mm512_srli_epi64(t, 32);
  __m512i uh = _mm512_srli_epi64(u, 32);
  __m512i r = _mm512_sub_epi64(th, uh);
  __mmask8 borrow = _mm512_cmplt_epu64_mask(th, uh);
  return _mm512_mask_add_epi64(r, borrow, r, k.m);
}

__attribute__((target("avx512f"))) inline __m512i vadd(__m512i a, __m512i b, const Vec32Context& k) {
  __m512i s = _mm512_add_epi64(a, b);
  return _mm512_min_epu64(s, _mm512_sub_epi64(s, k.m));
}

// For m < 2^30: inputs and output in [0, 2m), no final correction needed.
__attribute__((target("avx512f"))) inline __m512i vmul_lazy(__m512i a, __m512i b, const Vec32Context& k) {
  __m512i t = _mm512_mul_epu32(a, b);
  __m512i q = _mm512_mul_epu32(t, k.neg_minv);
  __m512i u = _mm512_mul_epu32(q, k.m);
  return _mm512_srli_epi64(_mm512_add_epi64(t, u), 32);
}

__attribute__((target("avx512f"))) inline __m512i vadd_lazy(__m512i a, __m512i b, const Vec32Context& k) {
  __m512i s = _mm512_add_epi64(a, b);
  return _mm512_min_epu64(s, _mm512_sub_epi64(s, k.two_m));
}

__attribute__((target("avx512f"))) inline __m512i vsub(__m512i a, __m512i b, const Vec32Context& k) {
  __m512i r = _mm512_sub_epi64(a, b);
  return _mm512_mask_add_epi64(r, _mm512_cmplt_epu64_mask(a, b), r, k.m);
}

// Maps [0, 2m) to [0, m).
__attribute__((target("avx512f"))) inline __m512i vreduce(__m512i a, const Vec32Context& k) {
  return _mm512_min_epu64(a, _mm512_sub_epi64(a, k.m));
}

// One element of the c0/c1 recurrence: c1 = c1 x + c0, c0 = c0 x.
template <bool Lazy>
__attribute__((target("avx512f"))) inline void pair_step(__m512i& a0, __m512i& a1, __m512i x, const Vec32Context& k) {
  if constexpr (Lazy) {
    a1 = vadd_lazy(vmul_lazy(a1, x, k), a0, k);
    a0 = vmul_lazy(a0, x, k);
  } else {
    a1 = vadd(vmul(a1, x, k), a0, k);
    a0 = vmul(a0, x, k);
  }
}

// Montgomery with R = 2^32, eight lanes per register, V registers interleaved
// to hide multiply latency. Each lane walks a contiguous block. Lane setup and
// the final lane product stay in registers, so short ranges are cheap too.
template <unsigned E, bool Lazy, bool Packed>
__attribute__((target("avx512f"))) PairAccumulator vector32_pair(const Modulus& m, std::uint64_t first,
                                                                 std::uint64_t count, std::uint64_t stride) {
  constexpr std::size_t V = 6;
  constexpr std::size_t L = 8 * V;
  const std::uint64_t mod = m.value();
  const auto minv = static_cast<std::uint32_t>(Montgomery64::inverse_pow2(mod));
  const LaneSplit split(count, L);
  const std::uint64_t one = (std::uint64_t{1} << 32) % mod;
  const auto r2 = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % mod);

  const Vec32Context k{_mm512_set1_epi64(static_cast<long long>(mod)),
                       _mm512_set1_epi64(static_cast<long long>(minv)),
                       _mm512_set1_epi64(static_cast<long long>(static_cast<std::uint32_t>(0u - minv))),
                       _mm512_set1_epi64(static_cast<long long>(2 * mod))};
  const __m512i vr2 = _mm512_set1_epi64(static_cast<long long>(r2));

  __m512i d[E + 1][V];
  __m512i a0[V];
  __m512i a1[V];
  for (std::size_t v = 0; v < V; ++v) {
    alignas(64) std::array<std::uint64_t, 8> start{};
    for (std::size_t i = 0; i < 8; ++i) start[i] = first + split.start(8 * v + i) * stride;
    const __m512i s = _mm512_load_si512(start.data());
    // s + j*stride < 2m, so one conditional subtraction reduces it.
    __m512i pw[E + 1];
    for (unsigned j = 0; j <= E; ++j) {
      __m512i x = vreduce(_mm512_add_epi64(s, _mm512_set1_epi64(static_cast<long long>(j * stride))), k);
      __m512i xm = vmul(x, vr2, k);
      __m512i y = xm;
      for (unsigned e = 1; e < E; ++e) y = vmul(y, xm, k);
      pw[j] = y;
    }
    for (unsigned i = 1; i <= E; ++i)
      for (unsigned j = E; j >= i; --j) pw[j] = vsub(pw[j], pw[j - 1], k);
    for (unsigned i = 0; i <= E; ++i) d[i][v] = pw[i];
    a0[v] = _mm512_set1_epi64(static_cast<long long>(one));
    a1[v] = _mm512_setzero_si512();
  }

  if constexpr (Packed) {
    // Differences stay below 2^31, so two registers share one in 32-bit
    // lanes: half the additions, and the loop state fits the register file.
    // The multiplies read the low half of each 64-bit lane.
    static_assert(V % 2 == 0);
    constexpr std::size_t W = V / 2;
    const __m512i bound = _mm512_set1_epi32(static_cast<int>(Lazy ? 2 * mod : mod));
    __m512i pd[E + 1][W];
    for (unsigned i = 0; i <= E; ++i)
      for (std::size_t w = 0; w < W; ++w)
        pd[i][w] = _mm512_or_si512(d[i][2 * w], _mm512_slli_epi64(d[i][2 * w + 1], 32));
    for (std::uint64_t n = 0; n < split.base; ++n) {
      for (std::size_t w = 0; w < W; ++w) {
        pair_step<Lazy>(a0[2 * w], a1[2 * w], pd[0][w], k);
        pair_step<Lazy>(a0[2 * w + 1], a1[2 * w + 1], _mm512_srli_epi64(pd[0][w], 32), k);
        for (unsigned i = 0; i < E; ++i) {
          __m512i s = _mm512_add_epi32(pd[i][w], pd[i + 1][w]);
          pd[i][w] = _mm512_min_epu32(s, _mm512_sub_epi32(s, bound));
        }
      }
    }
    const __m512i low = _mm512_set1_epi64(0xffffffff);
    for (std::size_t w = 0; w < W; ++w) {
      d[0][2 * w] = _mm512_and_si512(pd[0][w], low);
      d[0][2 * w + 1] = _mm512_srli_epi64(pd[0][w], 32);
    }
  } else {
    for (std::uint64_t n = 0; n < split.base; ++n) {
      for (std::size_t v = 0; v < V; ++v) {
        pair_step<Lazy>(a0[v], a1[v], d[0][v], k);
        for (unsigned i = 0; i < E; ++i)
          d[i][v] = Lazy ? vadd_lazy(d[i][v], d[i + 1][v], k) : vadd(d[i][v], d[i + 1][v], k);
      }
    }
  }
  // The first split.extra lanes take one more element; exact arithmetic
  // serves both the lazy and the strict ranges here.
  for (std::size_t v = 0; v < V; ++v) {
    __mmask8 mask = 0;
    for (std::size_t i = 0; i < 8; ++i)
      if (8 * v + i < split.extra) mask = static_cast<__mmask8>(mask | (1u << i));
    if (!mask) break;
    __m512i x = vreduce(d[0][v], k);
    __m512i n1 = vadd(vmul(a1[v], x, k), vreduce(a0[v], k), k);
    __m512i n0 = vmul(a0[v], x, k);
    a0[v] = _mm512_mask_blend_epi64(mask, a0[v], n0);
    a1[v] = _mm512_mask_blend_epi64(mask, a1[v], n1);
  }

  // Lane products. Lazy values below 2m < 2^31 are valid vmul inputs.
  __m512i c0 = a0[0];
  __m512i c1 = a1[0];
  for (std::size_t v = 1; v < V; ++v) {
    __m512i n1 = vadd(vmul(c0, a1[v], k), vmul(c1, a0[v], k), k);
    c0 = vmul(c0, a0[v], k);
    c1 = n1;
  }
  alignas(64) std::array<std::uint64_t, 8> out0{};
  alignas(64) std::array<std::uint64_t, 8> out1{};
  _mm512_store_si512(out0.data(), c0);
  _mm512_store_si512(out1.data(), vreduce(c1, k));

  // redc32 maps any value below 2^32 into [0, m).
  PairAccumulator acc;
  for (std::size_t i = 0; i < 8; ++i) acc = combine(acc, {redc32(out0[i], mod, minv), redc32(out1[i], mod, minv)}, m);
  return acc;
}

#endif  // WOLVAN_HAVE_X86

PairAccumulator dispatch_montgomery(const Modulus& m, unsigned e, std::uint64_t first, std::uint64_t count,
                                    std::uint64_t stride) {
  switch (e) {
    case 1: return montgomery_pair<1>(m, first, count, stride);
    case 2: return montgomery_pair<2>(m, first, count, stride);
    case 3: return montgomery_pair<3>(m, first, count, stride);
    case 4: return montgomery_pair<4>(m, first, count, stride);
    default: return reference_pair(m, e, first, count, stride);
  }
}

#ifdef WOLVAN_HAVE_X86
template <bool Lazy, bool Packed>
PairAccumulator dispatch_vector32(const Modulus& m, unsigned e, std::uint64_t first, std::uint64_t count,
                                  std::uint64_t stride) {
  switch (e) {
    case 1: return vector32_pair<1, Lazy, Packed>(m, first, count, stride);
    case 2: return vector32_pair<2, Lazy, Packed>(m, first, count, stride);
    case 3: return vector32_pair<3, Lazy, Packed>(m, first, count, stride);
    case 4: return vector32_pair<4, Lazy, Packed>(m, first, count, stride);
    default: return reference_pair(m, e, first, count, stride);
  }
}

PairAccumulator dispatch_vector32(const Modulus& m, unsigned e, std::uint64_t first, std::uint64_t count,
                                  std::uint64_t stride) {
  if (m.value() < (std::uint64_t{1} << 30)) return dispatch_vector32<true, true>(m, e, first, count, stride);
  if (m.value() < (std::uint64_t{1} << 31)) return dispatch_vector32<false, true>(m, e, first, count, stride);
  return dispatch_vector32<false, false>(m, e, first, count, stride);
}
#endif

// Below this many elements the lane setup costs more than it saves.
constexpr std::uint64_t kMinLaneCount = 256;

}  // namespace

bool vector32_available() noexcept {
#ifdef WOLVAN_HAVE_X86
  static const bool available = __builtin_cpu_supports("avx512f");
  return available;
#else
  return false;
#endif
}

PairAccumulator combine(const PairAccumulator& a, const PairAccumulator& b, const Modulus& p) noexcept {
  return {mulmod(a.c0, b.c0, p), p.add(mulmod(a.c0, b.c1, p), mulmod(a.c1, b.c0, p))};
}

Residue pair_value(const PairAccumulator& a, const Modulus& p) { return mulmod(a.c1, invmod(a.c0, p), p); }

PairAccumulator power_sum_pair(const Modulus& p, unsigned e, std::uint64_t first, std::uint64_t last,
                               std::uint64_t stride, KernelPath path) {
  if (stride == 0) throw std::invalid_argument("power_sum_pair: stride must be positive");
  if (first > last) return {};
  if (first == 0 || last >= p.value()) throw std::invalid_argument("power_sum_pair: range must lie in [1, p)");
  const std::uint64_t count = (last - first) / stride + 1;

  if (path == KernelPath::automatic) {
    if (count < kMinLaneCount)
      path = KernelPath::reference;
    else if (p.fits32() && vector32_available())
      path = KernelPath::vector32;
    else
      path = KernelPath::montgomery;
  }
  switch (path) {
    case KernelPath::reference: return reference_pair(p, e, first, count, stride);
    case KernelPath::montgomery: return dispatch_montgomery(p, e, first, count, stride);
    case KernelPath::vector32:
#ifdef WOLVAN_HAVE_X86
      if (!p.fits32()) throw std::invalid_argument("vector32 kernel requires p < 2^32");
      if (!vector32_available()) throw std::runtime_error("vector32 kernel needs AVX-512F");
      return dispatch_vector32(p, e, first, count, stride);
#else
      throw std::runtime_error("vector32 kernel unavailable on this architecture");
#endif
    case KernelPath::automatic: break;
  }
  return reference_pair(p, e, first, count, stride);
}

}  // namespace wolvan
