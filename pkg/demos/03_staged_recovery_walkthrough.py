"""
Staged recovery for receiver 2
==============================

The (4, 7) code with alpha = 2 serves receiver 2 with bursts of 8 and delay
18. Erase slots -8 .. -1 (shifted here to 0 .. 7) and watch the order in
which the decoder peels diagonals.
"""
from desco import apply, decode_user2, desco_construct, single_burst

code = desco_construct(4, 7, 2)
origin = 8  # slot 0 of the walkthrough is slot 8 of the simulation
stream = code.transmit(code.random_source(26, 0))
rep = decode_user2(code, apply(single_burst(0, 8, 26), stream))

names = {"1": "opposite diagonals from exposed p^B",
         "2": "recover p^A column",
         "3": "main diagonals from p^A",
         "4.1": "main diagonal, using opposite ones",
         "4.2": "opposite diagonals, using main ones"}
for e in rep.trace:
    label = "p^A" if e.kind == "pA" else f"d^{e.kind}"
    print(f"stage {e.stage:<4} k={e.k}  {label}[{e.index - origin:3d}]  {names[e.stage]}")

# %%
nonurgent = max(at for (t, r), at in rep.recovered_at.items() if r <= code.T - code.B)
print("non-urgent rows done at t =", nonurgent - origin)
print("worst delay:", rep.worst_delay, "of", code.T2)
print("values correct:", not rep.check_values(stream.source))
