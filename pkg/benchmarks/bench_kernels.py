"""Compiled vs numpy-fallback kernel timings, plus one full training step per backend.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from autocodec import kernels
from autocodec.kernels import _fallback


def cases(rng):
    x = rng.standard_normal((64, 64, 34, 34)).astype(np.float32)  # padded 32x32, 64 channels
    cols = _fallback.im2col(x, 3, 1, 32, 32)
    pool_in = rng.standard_normal((64, 64, 32, 32)).astype(np.float32)
    _, arg = _fallback.maxpool2_forward(pool_in)
    grad = rng.standard_normal((64, 64, 16, 16)).astype(np.float32)
    lengths = rng.integers(1, 17, 200_000).astype(np.uint8)
    codes = (rng.integers(0, 2**16, lengths.size) & ((1 << lengths.astype(np.int64)) - 1)).astype(np.uint32)
    return {
        "im2col 64x64x32x32 k3": lambda m: m.im2col(x, 3, 1, 32, 32),
        "col2im 64x64x32x32 k3": lambda m: m.col2im(cols, x.shape, 3, 1, 32, 32),
        "maxpool2 fwd 64x64x32x32": lambda m: m.maxpool2_forward(pool_in),
        "maxpool2 bwd 64x64x32x32": lambda m: m.maxpool2_backward(grad, arg),
        "pack_bits 200k codes": lambda m: m.pack_bits(codes, lengths),
    }


STEP = """
import time, numpy as np
from autocodec import kernels
from autocodec.model import build_model
from autocodec.nn.functional import mse_loss
from autocodec.nn.optim import adam_step
m = build_model(0)
x = np.random.default_rng(0).random((64, 3, 32, 32), dtype=np.float32)
best = 1e9
for _ in range({repeat}):
    t = time.perf_counter()
    y = m.forward(x, training=True)
    _, g = mse_loss(y, x)
    m.backward(g)
    for p in m.named_parameters().values():
        adam_step(p)
    best = min(best, time.perf_counter() - t)
print(kernels.BACKEND, best)
"""


def train_step(pure, repeat):
    env = dict(os.environ, AUTOCODEC_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", STEP.format(repeat=repeat)], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.compiled is None:
        sys.exit("compiled extension not built; run `pip install --no-build-isolation -e .` first")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'cython ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, fn in cases(rng).items():
        t_c = min(timeit.repeat(lambda: fn(kernels.compiled), number=1, repeat=args.repeat)) * 1e3
        t_f = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<28}{t_c:>12.2f}{t_f:>12.2f}{t_f / t_c:>9.1f}x")
    (b1, s1), (b2, s2) = train_step(False, args.repeat), train_step(True, args.repeat)
    print(f"{'train step, batch 64':<28}{s1 * 1e3:>12.0f}{s2 * 1e3:>12.0f}{s2 / s1:>9.1f}x   ({b1} vs {b2})")


if __name__ == "__main__":
    main()
