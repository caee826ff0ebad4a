# Copyright 2026 The iirfit Authors
# SPDX-License-Identifier: Apache-2.0
import numpy as np
rng = np.random.default_rng(20261019)
n = 32
draws = 100000
counts = np.empty(draws)
for i in range(draws):
    r = np.roots(rng.standard_normal(n + 1))
    counts[i] = np.sum(np.abs(r.imag) <= 1e-9 * np.maximum(1, np.abs(r)))
m = counts.mean()
print("draws", draws, "mean", m, "stderr", counts.std() / np.sqrt(draws), "const", m - 2/np.pi*np.log(n))
