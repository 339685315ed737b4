#!/usr/bin/env python3
"""
Train the 9x9 letter network with and without the shared weight bank,
then test it on noisy copies of the letters.

    python demos/train_letters.py
"""
import numpy as np

from memspike import NetworkConfig, flip_noise, glyph_dataset, init_network, train
from memspike.network import Sharing, evaluate

data = glyph_dataset(9, "ZVNXC")
for label, img in data:
    print(label, "black pixels:", img.n_black)

nets = {}
for sharing in Sharing:
    cfg = NetworkConfig(9, 9, len(data), sharing)
    net = init_network(cfg, [img for _, img in data])
    rep = train(net, data)
    nets[sharing] = net
    print(f"\n{sharing.value}: {net.bank.scalar_count} weight scalars, "
          f"threshold {net.v_threshold:.4f}, converged={rep.converged} after {rep.cycles_run} cycles")
    for r in rep.fire_history:
        ticks = " ".join(f"{t:>4}" if t is not None else "   -" for t in r.fire_ticks)
        print(f"  cycle {r.cycle} {r.label}: ticks {ticks}  winner {r.winner}")
    print("  largest applied |dw| per cycle:", np.round(rep.cycle_max(), 4))

# noise robustness; each image gets its own seed
print("\nflips  unshared  shared")
for flips in (0, 4, 8, 10, 12, 16):
    accs = []
    for sharing in Sharing:
        tests = [(lab, flip_noise(img, flips, 1000 * s + j))
                 for s in range(150) for j, (lab, img) in enumerate(data)]
        accs.append(evaluate(nets[sharing], tests).accuracy)
    print(f"{flips:5d}  {accs[0]:8.4f}  {accs[1]:6.4f}")
