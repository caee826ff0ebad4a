# Copyright 2026 The iirfit Authors
# SPDX-License-Identifier: Apache-2.0
import numpy as np
from math import sqrt
def exact(n):
    s, t = 0.0, 1.0
    for k in range(n // 2):
        if k > 0:
            t *= (4*k-3)*(4*k-1)/((4*k-2)*(4*k))
        s += t
    return sqrt(2) * s
rng = np.random.default_rng(7)
for n in (16, 32, 64):
    c = [np.sum(np.linalg.eigvals(rng.standard_normal((n, n))).imag == 0) for _ in range(20000)]
    print(n, "exact", exact(n), "numpy mean", np.mean(c), "stderr", np.std(c)/np.sqrt(len(c)), "law", sqrt(2*n/np.pi))
