"""
How much delay does receiver 2 need?
====================================

If receiver 2 accepts delay T2, no code can beat
1 - alpha*B / ((alpha-1)*B + T2). At T2 = alpha*T + B that equals the
single-user rate T/(T+B), so the diversity-embedded code is optimal.
Below it, a channel that erases alpha*B slots in every period of
(alpha-1)*B + T2 defeats the rate-T/(T+B) code.
"""
from desco import MulticastParams, capacity, converse_experiment, converse_rate_bound

B, T, alpha = 1, 2, 2
print(" T2  bound   code rate  periodic channel")
for T2 in range(1, alpha * T + B + 3):
    rep = converse_experiment(B, T, alpha, T2)
    status = "all repaired" if rep.feasible else f"{len(rep.unrecovered)} of {rep.checked} late"
    print(f"{T2:3d}  {str(converse_rate_bound(B, T2, alpha)):<6}  {str(rep.rate):<9}  {status}")

# %%
# The known optimal rates for (B1, T1) = (1, 4), B2 = 2 as T2 grows.
for T2 in range(1, 12):
    ans = capacity(MulticastParams(1, 4, 2, T2))
    print(f"T2={T2:2d} region {ans.region:<5} rate {ans.rate}")
