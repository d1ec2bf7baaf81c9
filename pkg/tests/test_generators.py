from __future__ import annotations

import pytest

from gridswarm.dynamics import ParticleKind
from gridswarm.generators import GeneratorKind, GeneratorSpec, generate_world
from gridswarm.worldmap import serialize_world


def test_rectangle_is_fully_free() -> None:
    workspace, configuration = generate_world(GeneratorSpec(GeneratorKind.RECTANGLE, 3, 3, budget=9))

    assert workspace.free_count == 9
    assert len(configuration) == 9
    assert configuration.kind is ParticleKind.SMALL


def test_random_polyomino_is_reproducible() -> None:
    spec = GeneratorSpec.parse("random-polyomino:width=8,height=8,budget=30", seed=7)

    first = serialize_world(*generate_world(spec))
    second = serialize_world(*generate_world(spec))

    assert first == second
    workspace, _ = generate_world(spec)
    assert workspace.free_count == 30
    assert workspace.is_connected


def test_seeds_change_the_world() -> None:
    spec = GeneratorSpec(GeneratorKind.RANDOM_POLYOMINO, 10, 10, budget=40)

    assert serialize_world(*generate_world(spec.with_seed(1))) != serialize_world(
        *generate_world(spec.with_seed(2))
    )


@pytest.mark.parametrize("budget", [500, 1000])
def test_vascular_tree_hits_budget(budget: int) -> None:
    side = int((budget * 2.5) ** 0.5) + 1
    spec = GeneratorSpec(GeneratorKind.VASCULAR_TREE, side, side, budget=budget, seed=3)

    workspace, configuration = generate_world(spec)

    assert workspace.free_count == budget
    assert workspace.is_connected
    assert len(configuration) == budget


def test_particles_and_targets_are_placed() -> None:
    spec = GeneratorSpec(
        GeneratorKind.RANDOM_POLYOMINO,
        6,
        6,
        budget=20,
        seed=4,
        particles=5,
        targets=3,
        particle_kind=ParticleKind.LARGE,
    )

    workspace, configuration = generate_world(spec)

    assert len(workspace.target) == 3
    assert len(configuration) == 5
    assert configuration.kind is ParticleKind.LARGE
    assert not configuration.positions & workspace.target


def test_token_round_trip() -> None:
    spec = GeneratorSpec(
        GeneratorKind.VASCULAR_TREE, 40, 40, budget=600, seed=11, depth=5, branch_angle=30.0
    )

    assert GeneratorSpec.parse(spec.to_token()) == spec


@pytest.mark.parametrize(
    "text",
    [
        "hexagon:width=3,height=3",
        "rectangle:width=3",
        "rectangle:width=3,height=3,budget=4",
        "random-polyomino:width=3,height=3",
        "random-polyomino:width=3,height=3,budget=10",
        "random-polyomino:width=3,height=3,budget=5,colour=red",
        "random-polyomino:width=3,height=3,budget=5,targets=6",
    ],
)
def test_invalid_specs_are_rejected(text: str) -> None:
    with pytest.raises(ValueError):
        GeneratorSpec.parse(text)
