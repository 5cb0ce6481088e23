#!/usr/bin/env python3
"""Full analysis of a network file, equivalent to `bnspectral analyze`.

Usage: python scripts/run_network_analysis.py NETWORK.bnet [OUTDIR]

Intended for the converted regulatory-network dataset (see README for the
expected format); works on any .bnet file.  Prints the ranking head, the
non-effective inputs, and collapse statistics, then writes the standard
report files.
"""

import sys
from collections import Counter
from pathlib import Path

from bnspectral.cli import main as cli_main


def main(argv: list[str]) -> int:
    if not argv:
        print(__doc__)
        return 2
    network = argv[0]
    outdir = argv[1] if len(argv) > 1 else "out-analysis"

    from bnspectral import collapse, parse
    from bnspectral.netlang import effective_inputs

    net = parse(Path(network).read_text())
    c = collapse(net)
    eff, non_eff = effective_inputs(c)
    degrees = Counter(n.fn.arity for n in c.nodes)
    print(f"inputs: {len(c.inputs)} declared, {len(eff)} effective")
    print(f"nodes: {len(c.nodes)} ({len(c.constants)} collapse to constants)")
    print("collapsed in-degree histogram:",
          dict(sorted(degrees.items())))
    if non_eff:
        print("non-effective inputs:", ", ".join(non_eff))

    return cli_main(["analyze", network, "--out", outdir, "--seed", "0",
                     "--top", "10", "--svg"])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
