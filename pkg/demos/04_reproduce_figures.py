# %% [markdown]
# # Topology comparison across many runs
#
# Reruns the synchrony and performance experiments at a reduced number of
# repetitions (the full setting uses 1000) and, if matplotlib is available,
# plots the per-figure CSVs.  Equivalent CLI:
#
# ```bash
# nkcs-conformity --reproduce-figures --output results/figures
# ```

# %%
import csv
import sys
from pathlib import Path

from nkcs_conformity.harness import parse_config, reproduce_figures

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 50
out = Path("results") / "figures"
written = reproduce_figures(parse_config(f"runs: {runs}\nseed: 2024"), out, workers=None)

# %%
for fig, path in written.items():
    rows = list(csv.reader(open(path)))
    header, last = rows[0], rows[-1]
    print(f"{fig:32s}", "  ".join(f"{h}={float(v):.3f}" for h, v in zip(header[1:], last[1:])))

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 5, figsize=(22, 4))
    for ax, name in zip(axes, [f for f in written if not f.startswith("baseline")]):
        rows = list(csv.reader(open(written[name])))
        cols = list(zip(*rows[1:]))
        for j, label in enumerate(rows[0][1:], start=1):
            ax.plot([int(t) for t in cols[0]], [float(v) for v in cols[j]], label=label)
        ax.set_title(name, fontsize=9)
        ax.set_xlabel("period")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(out / "figures.png", dpi=100)
    print("wrote", out / "figures.png")
