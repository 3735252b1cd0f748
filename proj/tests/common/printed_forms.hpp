#pragma once

// Congruences as printed in the literature, transcribed term by term.
// Inside each coefficient a base b stands for b^t; "~S" is the alternating sum.

#include <cstdint>
#include <string>
#include <vector>

namespace fixtures {

struct PrintedForm {
  std::string id;
  std::string terms;
  std::string cost;
};

inline const std::vector<PrintedForm>& printed_forms() {
  static const std::vector<PrintedForm> forms{
      {"bern2", "(1+2)S(1/6,1/5) - (2)S(3/10,1/3)", "1/15"},
      {"bern6",
       "-(4)S(3/20,13/80) - (4+16)S(13/80,1/6) + (1+2+8+32)S(1/6,27/160) + (1+2+8)S(27/160,7/40)"
       " + (1+2)S(7/40,1/5) - (32)S(53/160,1/3)",
       "5/96"},
      {"bern9",
       "(3+6)S(1/18,11/180) + (3+6-10)S(11/180,1/15) - (6-10+12)S(2/15,5/36) + (6+12)S(7/36,1/5)"
       " - (10)S(47/180,4/15) - (2+6+12)S(3/10,11/36) + (10)S(1/3,61/180) + (6+12)S(13/36,11/30)"
       " - (10)S(83/180,7/15)",
       "1/20"},
      {"bern16",
       "(3+6)S(1/18,11/180) + (3+6-10)S(11/180,7/108) + (3+6-10+18+36)S(7/108,47/720)"
       " + (3+6-10+18+36-40)S(47/720,1/15) - (6+18+36)S(1/10,11/108) - (6-10+12)S(2/15,5/36)"
       " - (20)S(83/360,25/108) + (6+18-20+36)S(25/108,7/30) - (18-20+36)S(4/15,29/108)"
       " + (20)S(29/108,97/360) + (10)S(1/3,61/180) + (6+12)S(13/36,11/30) + (20)S(11/30,133/360)"
       " + (18+36)S(43/108,2/5) - (6+18+36-40)S(13/30,313/720) - (6+18+36)S(313/720,47/108)",
       "1/24"},
      {"bern22",
       "(3+6+60)S(1/18,61/1080) + (3+6)S(61/1080,11/180) + (3+6-10)S(11/180,7/108)"
       " + (3+6-10+18+36)S(7/108,47/720) + (3+6-10+18+36-40)S(47/720,1/15) - (6+18+36)S(1/10,11/108)"
       " - (6-10+12+36-40+72)S(2/15,29/216) - (6-10+12-40)S(29/216,97/720) - (6-10+12)S(97/720,5/36)"
       " - (30)S(119/540,479/2160) - (30+120)S(479/2160,2/9) - (20)S(83/360,25/108)"
       " + (6+18-20+36)S(25/108,7/30) + (120)S(5/18,601/2160) + (6+12)S(13/36,263/720)"
       " + (6+12-40)S(263/720,79/216) + (6+12+36-40+72)S(79/216,11/30) + (20)S(11/30,133/360)"
       " + (18+36)S(43/108,2/5) - (6+18+36-40)S(13/30,313/720) - (6+18+36)S(313/720,47/108)"
       " + (30)S(4/9,241/540)",
       "3/80"},
      {"bern30",
       "(3+6+60)S(1/18,61/1080) + (3+6)S(61/1080,11/180) + (3+6-10)S(11/180,7/108)"
       " + (3+6-10+18+36)S(7/108,47/720) + (3+6-10+18+36-40)S(47/720,43/648)"
       " + (3+6-10+18+36-40+108+216)S(43/648,1/15) - (6+18+36+108+216)S(1/10,65/648)"
       " - (6+18+36)S(65/648,11/108) - (6-10+12+36-40+72+216+432)S(2/15,173/1296)"
       " - (6-10+12+36-40+72)S(173/1296,29/216) - (6-10+12-40)S(29/216,97/720)"
       " - (6-10+12)S(97/720,299/2160) - (6-10+12+120)S(299/2160,5/36) - (30)S(119/540,479/2160)"
       " - (30+120)S(479/2160,2/9) + (60)S(2/9,241/1080) - (20)S(83/360,25/108)"
       " + (6+18-20+36)S(25/108,151/648) + (6+18-20+36+108+216)S(151/648,7/30)"
       " + (120)S(5/18,601/2160) + (6+12+120)S(13/36,781/2160) + (6+12)S(781/2160,263/720)"
       " + (6+12-40)S(263/720,79/216) + (6+12+36-40+72)S(79/216,475/1296)"
       " + (6+12+36-40+72+216+432)S(475/1296,11/30) + (20)S(11/30,133/360) + (108+216)S(259/648,2/5)"
       " - (6+18+36-40+108+216)S(13/30,281/648) - (6+18+36-40)S(281/648,313/720)"
       " - (6+18+36)S(313/720,47/108)",
       "227/6480"},
      {"euler3", "(4)S(0,1/16) + (2)S(3/8,7/16) + (2+4)S(7/16,1/2)", "3/16"},
      {"euler5",
       "(16)S(0,1/64) + (2)S(3/8,7/16) + (2+4)S(7/16,15/32) + (2+4+8)S(15/32,31/64)"
       " + (2+4+8+16)S(31/64,1/2)",
       "9/64"},
      {"euler9",
       "(32)S(0,1/128) + (6)S(1/8,7/48) + (6)S(3/16,5/24) + (2+4)S(7/16,11/24) + (2+4+6)S(11/24,15/32)"
       " + (2+4+6+8)S(15/32,23/48) + (2+4+8)S(23/48,31/64) + (2+4+8+16)S(31/64,63/128)"
       " + (2+4+8+16+32)S(63/128,1/2)",
       "43/384"},
      {"euler16",
       "(64)S(0,1/256) + (12+18)S(1/16,5/72) + (12)S(5/72,7/96) + (6+12)S(7/48,11/72)"
       " + (6+12)S(13/72,3/16) + (4+8+12)S(11/48,15/64) + (18)S(19/72,17/64)"
       " + (4+8+12+18)S(17/64,13/48) + (18)S(19/48,29/72) + (12)S(41/96,7/16)"
       " + (2+4+6+8)S(15/32,23/48) + (2+4+6+8+12)S(23/48,31/64) + (2+4+6+8+12+16)S(31/64,35/72)"
       " + (2+4+8+16)S(35/72,63/128) + (2+4+8+16+32)S(63/128,127/256)"
       " + (2+4+8+16+32+64)S(127/256,1/2)",
       "205/2304"},
      {"euler24",
       "(128)S(0,1/512) + (48+72)S(1/64,5/288) + (12)S(5/72,41/576) + (12+72)S(41/576,7/96)"
       " + (6+12)S(7/48,11/72) + (6+12)S(13/72,3/16) + (36)S(3/16,55/288) + (4+8+12)S(11/48,67/288)"
       " + (4+8+12+48+72)S(67/288,15/64) + (4+8+12+16)S(15/64,137/576) + (4+8+12+16)S(151/576,19/72)"
       " + (4+8+12+16+18)S(19/72,17/64) + (4+8+12+18+48+72)S(17/64,77/288)"
       " + (4+8+12+18)S(77/288,13/48) + (18)S(19/48,29/72) + (72)S(41/96,247/576)"
       " + (2+4+6+8+36)S(137/288,23/48) + (2+4+6+8+12)S(23/48,139/288)"
       " + (2+4+6+8+12+48+72)S(139/288,31/64) + (2+4+6+8+12+16)S(31/64,35/72)"
       " + (2+4+8+16)S(35/72,63/128) + (2+4+8+16+32)S(63/128,127/256)"
       " + (2+4+8+16+32+64)S(127/256,255/512) + (2+4+8+16+32+64+128)S(255/512,1/2)",
       "115/1536"},
      {"mcintosh_euler_d2", "(2)S(0,1/12) - (2)S(5/12,1/2)", "1/6"},
      {"euler33",
       "(256)S(0,1/1536) - (24)S(5/144,11/288) - (36)S(61/432,31/216) - (6-12)S(11/72,133/864)"
       " - (6-12+72)S(133/864,67/432) - (6-12)S(67/432,17/108) - (6-12+18)S(17/108,205/1296)"
       " - (6-12+18+108)S(205/1296,103/648) - (6-12+18)S(103/648,23/144)"
       " - (6-12+18-24)S(23/144,35/216) - (6-12+18-24)S(37/216,25/144) - (6-12+18)S(25/144,113/648)"
       " - (6-12+18+108)S(113/648,227/1296) - (6-12+18)S(227/1296,19/108) - (6-12)S(19/108,77/432)"
       " - (6-12+72)S(77/432,155/864) - (6-12)S(155/864,13/72) - (6)S(13/72,41/216)"
       " - (6+36)S(41/216,83/432) - (6)S(83/432,7/36) - (2-4+6-8-12)S(35/72,421/864)"
       " - (2-4+6-8-12+72)S(421/864,211/432) - (2-4+6-8-12)S(211/432,47/96)"
       " - (2-4+6-8-16-12)S(47/96,53/108) - (2-4+6-8-16-12+18)S(53/108,637/1296)"
       " - (2-4+6-8-16-12+18+108)S(637/1296,319/648) - (2-4+6-8-12-16+18)S(319/648,71/144)"
       " - (2-4+6-8-16-12+18-24)S(71/144,95/192) - (2-4+6-8-12-16+18-24-32)S(95/192,107/216)"
       " - (2-4-8-16-32)S(107/216,191/384) - (2-4-8-16-32-64)S(191/384,383/768)"
       " - (2-4-8-16-32-64-128)S(383/768,767/1536) - (2-4-8-16-32-64-128-256)S(767/1536,1/2)",
       "27/512"},
  };
  return forms;
}

struct PrintedIntegerForm {
  std::string id;
  std::int64_t left;
  std::vector<std::int64_t> coeffs;
};

// Integer relations at k = (p-3)/2 (Bernoulli) and k = 1 (Euler), term
// order as in printed_forms().
inline const std::vector<PrintedIntegerForm>& printed_integer_forms() {
  static const std::vector<PrintedIntegerForm> forms{
      {"stafford_vandiver", 21, {1}},
      {"bern2", 112, {9, -1}},
      {"bern6", 458752, {-512, -520, 36929, 36928, 36864, -1}},
      {"bern9", 336000, {1000, 976, -101, 125, -24, -3125, 24, 125, -24}},
      {"bern16",
       72576000,
       {216000, 210816, 211816, 211735, -25000, -21816, -648, 24352, -352, 648, 5184, 27000, 648, 1000, -24919,
        -25000}},
      {"bern22",
       72576000,
       {216024, 216000, 210816, 211816, 211735, -25000, -21860, -21735, -21816, -192, -195,
        -648,   24352,  3,      27000,  26919,  27044,  648,    1000,   -24919, -25000, 192}},
      {"bern30",
       15676416000,
       {46661184, 46656000, 45536256, 45752256, 45734760, 45735760, -5401000, -5400000, -4721885, -4721760,
        -4694760, -4712256, -4712904, -41472,   -42120,   5184,     -139968,  5260032,  5261032,  648,
        5832648,  5832000,  5814504,  5841504,  5841629,  139968,   1000,     -5383504, -5382504, -5400000}},
      {"euler3", -64, {1, 4, 5}},
      {"euler5", -1024, {1, 64, 80, 84, 85}},
      {"euler9", -36864, {9, 256, 256, 2880, 3136, 3280, 3024, 3060, 3069}},
      {"euler16",
       -1327104,
       {81, 3328, 2304, 11520, 11520, 28224, 1024, 29248, 1024, 2304, 118080, 120384, 121680, 110160, 110484,
        110565}},
      {"euler24",
       -5308416,
       {81,     832,    9216,   9472,   46080,  46080,  1024,   112896, 113728, 118080, 118080, 122176,
        117824, 116992, 4096,   256,    473344, 481536, 482368, 486720, 440640, 441936, 442260, 442341}},
      {"euler33",
       477757440,
       {-729,    82944,   36864,   995328,  1004544, 995328,  1142784, 1146880, 1142784, 1059840, 1059840,
        1142784, 1146880, 1142784, 995328,  1004544, 995328,  1327104, 1363968, 1327104, 9206784, 9216000,
        9206784, 9020160, 9167616, 9171712, 9167616, 9084672, 9038016, 7978176, 7966512, 7963596, 7962867}},
  };
  return forms;
}

// The nine-term transformation graph, written with i, r, s<f>, t<d> for
// identity, reflection, separation and subdivision.
inline constexpr const char* kNineTermGraph = "(t3s1/2iit2irirt2iri)(t2t3s1/2iit2irirt2irirs1/6it5iiiriri)";

}  // namespace fixtures
