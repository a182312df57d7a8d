#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Regenerates the S-parameter fixtures in this directory. The encoders here are
# written independently of the C++ readers and writers.

import cmath
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
FREQS = [149.5, 150.5]
N_RIS, N_AMAF = 4, 4
N = N_RIS + N_AMAF

# AMAF coupling, 0-based AMAF elements on a 2x2 grid; S[out][in]
ADJ = complex(0.1, 0.1)
ADJ_WEAK = complex(0.05, 0.1)
DIAG = complex(0.0, 0.02)


def matrix(f_index):
    rng = random.Random(1234 + f_index)
    scale = 1.0 if f_index == 0 else 0.9
    s = [[0j] * N for _ in range(N)]
    for i in range(N):
        for j in range(N):
            s[i][j] = complex(round(rng.uniform(-0.2, 0.2), 6), round(rng.uniform(-0.2, 0.2), 6))
    amaf = [[0j] * N_AMAF for _ in range(N_AMAF)]
    for a in range(N_AMAF):
        amaf[a][a] = complex(-0.2, 0.0)
    for a, b in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 3), (3, 1), (2, 3), (3, 2)]:
        amaf[a][b] = ADJ
    amaf[1][0] = ADJ_WEAK
    for a, b in [(0, 3), (3, 0), (1, 2), (2, 1)]:
        amaf[a][b] = DIAG
    for a in range(N_AMAF):
        for b in range(N_AMAF):
            s[N_RIS + a][N_RIS + b] = amaf[a][b] * scale
    return s


def fmt(x):
    return repr(float(x))


def pair(v, kind):
    if kind == "RI":
        return [fmt(v.real), fmt(v.imag)]
    mag, ang = abs(v), math.degrees(cmath.phase(v))
    if kind == "MA":
        return [fmt(mag), fmt(ang)]
    return [fmt(20.0 * math.log10(mag)), fmt(ang)]


def write_touchstone(path, kind, mats, order=None):
    order = order or list(range(N))  # order[solver_port] = canonical port
    with open(path, "w") as out:
        out.write("! 8-port fixture: RIS ports then AMAF ports\n")
        out.write("# GHz S %s R 50\n" % kind)
        for f, m in zip(FREQS, mats):
            for row in range(N):
                pairs = []
                for col in range(N):
                    pairs += pair(m[order[row]][order[col]], kind)
                for chunk in range(0, len(pairs), 8):
                    head = fmt(f) if row == 0 and chunk == 0 else "   "
                    out.write(head + " " + " ".join(pairs[chunk:chunk + 8]) + "\n")


def write_csv(path, mats):
    with open(path, "w") as out:
        out.write("freq_GHz,ris_port,amaf_port,re,im\n")
        for f, m in zip(FREQS, mats):
            for k in range(N_RIS):
                for l in range(N_AMAF):
                    v = m[k][N_RIS + l]
                    out.write("%s,%d,%d,%s,%s\n" % (fmt(f), k + 1, l + 1, fmt(v.real), fmt(v.imag)))
            for a in range(N_AMAF):
                for b in range(N_AMAF):
                    if a != b:
                        v = m[N_RIS + a][N_RIS + b]
                        out.write("%s,A%d,%d,%s,%s\n" % (fmt(f), a + 1, b + 1, fmt(v.real), fmt(v.imag)))


def write(name, text):
    with open(os.path.join(HERE, name), "w") as out:
        out.write(text)


def main():
    mats = [matrix(0), matrix(1)]
    write_touchstone(os.path.join(HERE, "fixture8_ri.s8p"), "RI", mats)
    write_touchstone(os.path.join(HERE, "fixture8_ma.s8p"), "MA", mats)
    write_touchstone(os.path.join(HERE, "fixture8_db.s8p"), "DB", mats)
    # Solver numbering with the AMAF ports first: solver port p holds canonical port order[p]
    write_touchstone(os.path.join(HERE, "fixture8_amaf_first.s8p"), "RI", mats, [4, 5, 6, 7, 0, 1, 2, 3])
    write_csv(os.path.join(HERE, "fixture8.csv"), mats)

    with open(os.path.join(HERE, "fixture8_ri.s8p")) as f:
        lines = f.read().splitlines()
    # Second record starts on line 19 and spans 16 lines; keep 5 of them
    write("truncated.s8p", "\n".join(lines[:23]) + "\n")

    write("two_port.s2p",
          "! S11 S21 S12 S22 ordering\n"
          "# ghz s ri r 50\n"
          "1.0 0.11 -0.01 0.21 -0.02 0.12 -0.03 0.22 -0.04\n"
          "2.0 0.31 0.01 0.41 0.02 0.32 0.03 0.42 0.04\n")
    write("bad_token.s2p",
          "! bad token on line 5\n"
          "# GHz S RI R 50\n"
          "1.0 0.1 0 0.2 0 0.2 0 0.1 0\n"
          "! comment\n"
          "2.0 0.1 0 0.2x 0 0.2 0 0.1 0\n")
    write("no_option.s2p",
          "! no option line\n"
          "1.0 0.1 0 0.2 0 0.2 0 0.1 0\n")
    write("non_monotonic.s2p",
          "# GHz S RI R 50\n"
          "2.0 0.1 0 0.2 0 0.2 0 0.1 0\n"
          "1.0 0.1 0 0.2 0 0.2 0 0.1 0\n")
    write("wrong_size.s2p",
          "# GHz S RI R 50\n"
          "1.0 0.1 0 0.2 0 0.2 0 0.1 0\n"
          "2.0 0.1 0 0.2 0 0.2\n")
    write("y_params.s2p",
          "# GHz Y RI R 50\n"
          "1.0 0.1 0 0.2 0 0.2 0 0.1 0\n")
    write("version2.s2p",
          "[Version] 2.0\n"
          "# GHz S RI R 50\n"
          "1.0 0.1 0 0.2 0 0.2 0 0.1 0\n")
    write("bad_header.csv",
          "freq,ris,amaf,re,im\n"
          "150,1,1,0.1,0.2\n")
    write("bad_number.csv",
          "freq_GHz,ris_port,amaf_port,re,im\n"
          "150,1,1,0.1,0.2\n"
          "150,2,1,abc,0.2\n")
    write("missing_row.csv",
          "freq_GHz,ris_port,amaf_port,re,im\n"
          "150,1,1,0.1,0.2\n"
          "150,1,2,0.1,0.2\n"
          "150,2,1,0.1,0.2\n")
    write("duplicate_row.csv",
          "freq_GHz,ris_port,amaf_port,re,im\n"
          "150,1,1,0.1,0.2\n"
          "150,2,1,0.1,0.2\n"
          "150,1,1,0.3,0.2\n")


if __name__ == "__main__":
    main()
