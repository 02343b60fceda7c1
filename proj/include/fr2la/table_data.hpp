// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

// Embedded copies of the 3GPP TS 38.214 tables used by the simulator, kept in
// the same one-row-per-line text format the loader accepts from external
// files so the transcriptions stay auditable against the standard:
//
//   MCS rows:  <index> <Qm> <code_rate_x1024> <spectral_efficiency>
//              <index> <Qm> reserved
//   CQI rows:  <cqi> <Qm> <code_rate_x1024> <spectral_efficiency>
//              0 out_of_range
//
// Code rates are the standard's R x 1024 values (two rows carry the x.5
// rates); spectral efficiency is the standard's printed 4-decimal value and
// is cross-checked against Qm * R at load time.

namespace fr2la::table_data {

// TS 38.214 Table 5.1.3.1-1 (MCS index table 1 for PDSCH, up to 64QAM).
inline constexpr const char* mcs_table1 = R"(
0  2 120 0.2344
1  2 157 0.3066
2  2 193 0.3770
3  2 251 0.4902
4  2 308 0.6016
5  2 379 0.7402
6  2 449 0.8770
7  2 526 1.0273
8  2 602 1.1758
9  2 679 1.3262
10 4 340 1.3281
11 4 378 1.4766
12 4 434 1.6953
13 4 490 1.9141
14 4 553 2.1602
15 4 616 2.4063
16 4 658 2.5703
17 6 438 2.5664
18 6 466 2.7305
19 6 517 3.0293
20 6 567 3.3223
21 6 616 3.6094
22 6 666 3.9023
23 6 719 4.2129
24 6 772 4.5234
25 6 822 4.8164
26 6 873 5.1152
27 6 910 5.3320
28 6 948 5.5547
29 2 reserved
30 4 reserved
31 6 reserved
)";

// TS 38.214 Table 5.1.3.1-2 (MCS index table 2 for PDSCH, up to 256QAM).
inline constexpr const char* mcs_table2 = R"(
0  2 120   0.2344
1  2 193   0.3770
2  2 308   0.6016
3  2 449   0.8770
4  2 602   1.1758
5  4 378   1.4766
6  4 434   1.6953
7  4 490   1.9141
8  4 553   2.1602
9  4 616   2.4063
10 4 658   2.5703
11 6 466   2.7305
12 6 517   3.0293
13 6 567   3.3223
14 6 616   3.6094
15 6 666   3.9023
16 6 719   4.2129
17 6 772   4.5234
18 6 822   4.8164
19 6 873   5.1152
20 8 682.5 5.3320
21 8 711   5.5547
22 8 754   5.8906
23 8 797   6.2266
24 8 841   6.5703
25 8 885   6.9141
26 8 916.5 7.1602
27 8 948   7.4063
28 2 reserved
29 4 reserved
30 6 reserved
31 8 reserved
)";

// TS 38.214 Table 5.1.3.1-4 (MCS index table 4 for PDSCH, up to 1024QAM).
inline constexpr const char* mcs_table4 = R"(
0  2  120   0.2344
1  2  193   0.3770
2  2  449   0.8770
3  4  378   1.4766
4  4  490   1.9141
5  4  616   2.4063
6  6  466   2.7305
7  6  517   3.0293
8  6  567   3.3223
9  6  616   3.6094
10 6  666   3.9023
11 6  719   4.2129
12 6  772   4.5234
13 6  822   4.8164
14 6  873   5.1152
15 8  682.5 5.3320
16 8  711   5.5547
17 8  754   5.8906
18 8  797   6.2266
19 8  841   6.5703
20 8  885   6.9141
21 8  916.5 7.1602
22 8  948   7.4063
23 10 805.5 7.8662
24 10 853   8.3301
25 10 900.5 8.7939
26 10 948   9.2578
27 2  reserved
28 4  reserved
29 6  reserved
30 8  reserved
31 10 reserved
)";

// TS 38.214 Table 5.2.2.1-2 (CQI table 1, up to 64QAM).
inline constexpr const char* cqi_table2 = R"(
0  out_of_range
1  2 78  0.1523
2  2 120 0.2344
3  2 193 0.3770
4  2 308 0.6016
5  2 449 0.8770
6  2 602 1.1758
7  4 378 1.4766
8  4 490 1.9141
9  4 616 2.4063
10 6 466 2.7305
11 6 567 3.3223
12 6 666 3.9023
13 6 772 4.5234
14 6 873 5.1152
15 6 948 5.5547
)";

// TS 38.214 Table 5.2.2.1-3 (CQI table 2, up to 256QAM).
inline constexpr const char* cqi_table3 = R"(
0  out_of_range
1  2 78  0.1523
2  2 193 0.3770
3  2 449 0.8770
4  4 378 1.4766
5  4 490 1.9141
6  4 616 2.4063
7  6 466 2.7305
8  6 567 3.3223
9  6 666 3.9023
10 6 772 4.5234
11 6 873 5.1152
12 8 711 5.5547
13 8 797 6.2266
14 8 885 6.9141
15 8 948 7.4063
)";

// TS 38.214 Table 5.2.2.1-5 (CQI table 4, up to 1024QAM).
inline constexpr const char* cqi_table5 = R"(
0  out_of_range
1  2  78    0.1523
2  2  193   0.3770
3  2  449   0.8770
4  4  378   1.4766
5  4  616   2.4063
6  6  517   3.0293
7  6  666   3.9023
8  6  822   4.8164
9  8  711   5.5547
10 8  797   6.2266
11 8  885   6.9141
12 8  948   7.4063
13 10 853   8.3301
14 10 900.5 8.7939
15 10 948   9.2578
)";

// TS 38.214 Table 5.1.3.2-1: TBS values for N_info <= 3824 (93 entries).
inline constexpr const char* tbs_small = R"(
24 32 40 48 56 64 72 80 88 96
104 112 120 128 136 144 152 160 168 176
184 192 208 224 240 256 272 288 304 320
336 352 368 384 408 432 456 480 504 528
552 576 608 640 672 704 736 768 808 848
888 928 984 1032 1064 1128 1160 1192 1224 1256
1288 1320 1352 1416 1480 1544 1608 1672 1736 1800
1864 1928 2024 2088 2152 2216 2280 2408 2472 2536
2600 2664 2728 2792 2856 2976 3104 3240 3368 3496
3624 3752 3824
)";

}  // namespace fr2la::table_data
