"""
Single-user streaming codes
===========================

A (B, T) streaming code splits every source packet into T sub-symbols and
sends B parity sub-symbols with it. Any burst of up to B lost packets is
repaired, and every lost packet comes back no later than T slots after it
was sent.
"""
import numpy as np

from desco import MAIN, apply, choose_coefficients, sco_decode_burst, single_burst

# %%
# The smallest interesting case, (B, T) = (1, 2), over GF(2). The parity at
# slot i is s_1[i-2] + s_2[i-1]: one sub-symbol from each of two packets
# lying on a diagonal of the (row, time) grid.
code = choose_coefficients(1, 2, MAIN, 1, m=1)
print("taps (lag, row, coeff):", code.taps[0])
print("rate:", code.rate)

# %%
# Send a random stream, lose slot 5 and decode. Row 2 of s[5] is alone on
# the diagonal closed by p[6]; row 1 needs p[7].
stream = code.transmit(code.random_source(12, np.random.default_rng(0)))
report = sco_decode_burst(code, apply(single_burst(5, 1, 12), stream))
for sym, at in sorted(report.recovered_at.items()):
    print(f"s_{sym[1]}[{sym[0]}] recovered at slot {at} (delay {at - sym[0]})")

# %%
# Interleaving the same diagonal with step 2 gives a (2, 4) code at the
# same rate: p[i] = s_1[i-4] + s_2[i-2].
wide = choose_coefficients(1, 2, MAIN, 2, m=1)
print("step-2 taps:", wide.taps[0], "burst", wide.burst, "delay", wide.delay)
report = sco_decode_burst(wide, apply(single_burst(5, 2, 16), wide.transmit(wide.random_source(16, 1))))
print("worst delay for a 2-slot burst:", report.worst_delay)

# %%
# Bigger bursts need a larger field. The construction tries a fixed list of
# coefficient tables and keeps the first one that an exhaustive oracle
# sweep certifies.
code = choose_coefficients(2, 5, MAIN, 1, m=8)
print("(2,5) table over GF(256):")
print(np.array(code.coeffs))
