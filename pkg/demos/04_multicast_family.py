"""
Other ways to serve two receivers
=================================

For the pair {(1,2), (2,4)}:

* concatenating both single-user parity streams costs rate (1/2);
* adding a shifted copy of the step-2 stream keeps rate 2/3 but receiver
  2 waits 6 slots;
* running a {(2,3),(4,8)} diversity-embedded code on a stream whose
  packets are split in two reaches the optimal 3/5 with delays 2 and 4.
"""
from desco import (
    MulticastParams,
    capacity,
    ccsco_construct,
    expanded_musco_construct,
    iasco_construct,
    sweep,
)

codes = {
    "concatenated": ccsco_construct(MulticastParams(1, 2, 2, 4), m=1),
    "shifted (shift 2)": iasco_construct(1, 2, 2, 2, m=1),
    "split stream": expanded_musco_construct(),
}
for name, code in codes.items():
    d1 = sweep(code, 1).worst_delay
    d2 = sweep(code, 2).worst_delay
    print(f"{name:<18} rate {str(code.rate):<4} receiver 1 delay {d1}, receiver 2 delay {d2}")

print("best possible rate for {(1,2),(2,4)}:", capacity(MulticastParams(1, 2, 2, 4)).rate)

# %%
# Other shifts of the second stream: 0 breaks receiver 1, larger ones just
# push receiver 2's delay up.
for shift in range(5):
    try:
        print("shift", shift, "-> receiver 2 delay", iasco_construct(1, 2, 2, shift, m=1).t2)
    except Exception as exc:
        print("shift", shift, "->", exc)
