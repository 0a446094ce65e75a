"""Seeded random networks and clamp scenarios for property-style tests.

Everything here is a deterministic function of the seed: names are generated
in a fixed order and pattern sets are kept as lists (never iterated from
hash-ordered sets), so two runs produce identical specs byte for byte.
"""
from __future__ import annotations

import random

from conceptsim import ConceptSpec, NetworkSpec, ValidatedNetwork, validate_network


def random_network(seed: int) -> ValidatedNetwork:
    """A small layered network: 2-3 layers, 2-4 concepts per layer,
    patterns of size 2-3 drawn from the layer below."""
    rng = random.Random(seed)
    n_layers = rng.randint(2, 3)
    sizes = [rng.randint(2, 4)]
    for layer in range(1, n_layers):
        top = layer == n_layers - 1
        # non-top layers need at least 2 concepts so size-2 patterns exist above
        sizes.append(rng.randint(1 if top else 2, 4))

    concepts: list[ConceptSpec] = []
    names_by_layer: list[list[str]] = []
    for layer, size in enumerate(sizes):
        names = [f"u{layer}_{i}" for i in range(size)]
        names_by_layer.append(names)
        for name in names:
            if layer == 0:
                concepts.append(ConceptSpec(name, 0))
                continue
            below = names_by_layer[layer - 1]
            patterns: list[tuple[str, ...]] = []
            want = rng.randint(1, 2)
            attempts = 0
            while len(patterns) < want and attempts < 20:
                attempts += 1
                k = rng.randint(2, min(3, len(below)))
                pat = tuple(sorted(rng.sample(below, k)))
                if pat not in patterns:
                    patterns.append(pat)
            concepts.append(ConceptSpec(name, layer, tuple(patterns)))
    return validate_network(NetworkSpec(tuple(concepts)))


def random_clamp(net: ValidatedNetwork, rng: random.Random) -> dict[int, int]:
    return {e: 1 for e in net.bottom if rng.random() < 0.5}


def random_scenario(net: ValidatedNetwork, seed: int, phases: int = 3):
    """(clamp, hold=None) pairs over random bottom subsets."""
    rng = random.Random(seed)
    return [(random_clamp(net, rng), None) for _ in range(phases)]
