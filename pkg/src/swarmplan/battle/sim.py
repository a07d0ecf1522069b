"""Simplified real-time combat simulator.

Two teams of units fight on a continuous 100x100 arena. Our side picks a
target per unit every `assignment_period` frames; the opponent follows a
scripted attack-move toward our centroid refreshed every
`opponent_order_period` frames. Attacks miss with probability 1/256, so
battles are stochastic but bit-reproducible under a seed. Reward per
assignment window is the normalized health swing
(our delta + enemy damage taken) / our initial total health.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ARENA = 100.0
CONTACT_EPS = 0.3
FRAME_CAP = 2000
TEAM_OURS = 0
TEAM_THEIRS = 1


class BattleError(ValueError):
    pass


@dataclass(frozen=True)
class UnitSpec:
    name: str
    max_health: float
    damage_per_attack: float
    cooldown_frames: int
    attack_range: float
    speed: float
    is_flying: bool
    type_id: int
    radius: float = 0.75

    def __post_init__(self):
        if min(self.max_health, self.damage_per_attack, self.cooldown_frames,
               self.attack_range, self.speed, self.radius) <= 0:
            raise BattleError(f"spec {self.name}: all numeric fields must be positive")


@dataclass
class Unit:
    spec: UnitSpec
    pos: np.ndarray
    velocity: np.ndarray
    health: float
    cooldown_remaining: int
    team: int
    uid: int
    current_target: int | None = None

    @property
    def alive(self) -> bool:
        return self.health > 0.0


@dataclass
class BattleConfig:
    ours: list          # list of UnitSpec
    theirs: list
    seed: int = 0
    assignment_period: int = 6
    opponent_order_period: int = 60
    miss_probability: float = 1.0 / 256.0
    frame_cap: int = FRAME_CAP

    def __post_init__(self):
        if not self.ours or not self.theirs:
            raise BattleError("both teams need at least one unit")
        if self.assignment_period < 1 or self.opponent_order_period < 1:
            raise BattleError("periods must be >= 1")
        if not 0 <= self.miss_probability < 1:
            raise BattleError("miss_probability must be in [0, 1)")


@dataclass
class BattleState:
    config: BattleConfig
    ours: list
    theirs: list
    frame: int
    rng: np.random.Generator
    our_health0: float
    opp_waypoint: np.ndarray
    prev_targets: np.ndarray  # our last-window targets, for features
    type_ids: list            # distinct type ids in the scenario, sorted
    outcome: str | None = None

    @property
    def done(self) -> bool:
        return self.outcome is not None

    def team_health(self, team: int) -> float:
        units = self.ours if team == TEAM_OURS else self.theirs
        return sum(u.health for u in units)


OUR_ANCHOR = np.array([25.0, 50.0])
THEIR_ANCHOR = np.array([75.0, 50.0])
SPAWN_STD = np.array([4.0, 10.0])  # Y-spread > X-spread


def spawn_battle(config: BattleConfig) -> BattleState:
    rng = np.random.default_rng(config.seed)
    max_range = max(s.attack_range for s in config.ours + config.theirs)
    # The teams face each other along X, so only X-spread can close the
    # gap between the anchors; spawns are clamped to 3 sigma.
    x_spread = 3.0 * float(SPAWN_STD[0])
    x_gap = abs(THEIR_ANCHOR[0] - OUR_ANCHOR[0])
    if x_gap - 2 * x_spread <= max_range:
        raise BattleError("anchors too close: units could spawn within fire range")

    def make_team(specs, anchor, team, uid0):
        units = []
        for k, spec in enumerate(specs):
            offset = np.clip(rng.normal(0.0, 1.0, 2) * SPAWN_STD,
                             -3.0 * SPAWN_STD, 3.0 * SPAWN_STD)
            pos = np.clip(anchor + offset, 1.0, ARENA - 1.0)
            units.append(Unit(spec, pos, np.zeros(2), spec.max_health,
                              0, team, uid0 + k))
        return units

    ours = make_team(config.ours, OUR_ANCHOR, TEAM_OURS, 0)
    theirs = make_team(config.theirs, THEIR_ANCHOR, TEAM_THEIRS, len(ours))
    type_ids = sorted({s.type_id for s in config.ours + config.theirs})
    return BattleState(
        config, ours, theirs, 0, rng,
        sum(u.health for u in ours),
        opp_waypoint=OUR_ANCHOR.copy(),
        prev_targets=np.full(len(ours), -1, dtype=int),
        type_ids=type_ids,
    )


def effective_range(attacker: Unit, target: Unit) -> float:
    """Edge-to-edge reach: melee units connect at contact distance."""
    contact = attacker.spec.radius + target.spec.radius + CONTACT_EPS
    return max(attacker.spec.attack_range, contact)


def _try_attack(state: BattleState, attacker: Unit, target: Unit):
    attacker.velocity = np.zeros(2)
    if attacker.cooldown_remaining > 0:
        return
    hit = state.rng.random() >= state.config.miss_probability
    if hit:
        target.health = max(0.0, target.health - attacker.spec.damage_per_attack)
    attacker.cooldown_remaining = attacker.spec.cooldown_frames


def _move_toward(unit: Unit, dest: np.ndarray, stop_dist: float = 0.0):
    delta = dest - unit.pos
    dist = float(np.linalg.norm(delta))
    if dist <= stop_dist or dist == 0.0:
        unit.velocity = np.zeros(2)
        return
    step_len = min(unit.spec.speed, dist - stop_dist)
    unit.velocity = delta / dist * step_len
    unit.pos = unit.pos + unit.velocity


def _act_ours(state: BattleState, unit: Unit):
    j = unit.current_target
    if j is None or not state.theirs[j].alive:
        unit.velocity = np.zeros(2)
        return
    target = state.theirs[j]
    reach = effective_range(unit, target)
    if np.linalg.norm(target.pos - unit.pos) <= reach:
        _try_attack(state, unit, target)
    else:
        _move_toward(unit, target.pos, stop_dist=reach)


def _acquire_opponent_targets(state: BattleState):
    """Opponent target acquisition, run once per assignment window so
    both sides act on the same decision cadence: each opponent unit
    locks onto the nearest living enemy within reach, if any."""
    for unit in state.theirs:
        best = None
        for i, e in enumerate(state.ours):
            if not e.alive:
                continue
            d = float(np.linalg.norm(e.pos - unit.pos))
            if d <= effective_range(unit, e) and (best is None or (d, e.uid) < best[:2]):
                best = (d, e.uid, i)
        unit.current_target = None if best is None else best[2]


def _act_opponent(state: BattleState, unit: Unit):
    # Attack-move: fight the locked target; with no live target, walk
    # toward the waypoint until the next acquisition pass.
    i = unit.current_target
    if i is not None and state.ours[i].alive:
        target = state.ours[i]
        reach = effective_range(unit, target)
        if np.linalg.norm(target.pos - unit.pos) <= reach:
            _try_attack(state, unit, target)
        else:
            _move_toward(unit, target.pos, stop_dist=reach)
    else:
        unit.velocity = np.zeros(2)
        _move_toward(unit, state.opp_waypoint)


def _resolve_collisions(units):
    """Symmetric pairwise separation push between overlapping ground units."""
    ground = [u for u in units if u.alive and not u.spec.is_flying]
    for a in range(len(ground)):
        for b in range(a + 1, len(ground)):
            ua, ub = ground[a], ground[b]
            delta = ub.pos - ua.pos
            dist = float(np.linalg.norm(delta))
            min_dist = ua.spec.radius + ub.spec.radius
            if dist >= min_dist:
                continue
            if dist == 0.0:
                direction = np.array([1.0, 0.0])
            else:
                direction = delta / dist
            push = 0.5 * (min_dist - dist)
            ua.pos = ua.pos - direction * push
            ub.pos = ub.pos + direction * push


def _centroid(units, fallback):
    alive = [u for u in units if u.alive]
    if not alive:
        return fallback
    return np.mean([u.pos for u in alive], axis=0)


def step_battle(state: BattleState, our_assignment):
    """Advance one assignment window; returns (reward, done, outcome).

    `our_assignment.target[i]` indexes the enemy list; -1 or a dead enemy
    leaves unit i idle for the window.
    """
    if state.done:
        raise BattleError("battle already decided")
    target = np.asarray(our_assignment.target)
    if target.shape[0] != len(state.ours):
        raise BattleError(
            f"assignment covers {target.shape[0]} units, team has {len(state.ours)}"
        )
    for i, unit in enumerate(state.ours):
        j = int(target[i])
        if j < -1 or j >= len(state.theirs):
            raise BattleError(f"unit {i} assigned to invalid enemy {j}")
        unit.current_target = j if j >= 0 and state.theirs[j].alive else None
    state.prev_targets = np.array(
        [-1 if u.current_target is None else u.current_target for u in state.ours]
    )

    our_before = state.team_health(TEAM_OURS)
    their_before = state.team_health(TEAM_THEIRS)

    _acquire_opponent_targets(state)
    for _ in range(state.config.assignment_period):
        if state.frame % state.config.opponent_order_period == 0:
            state.opp_waypoint = _centroid(state.ours, state.opp_waypoint)
        for unit in state.ours + state.theirs:
            if unit.alive and unit.cooldown_remaining > 0:
                unit.cooldown_remaining -= 1
        for unit in state.ours:
            if unit.alive:
                _act_ours(state, unit)
        for unit in state.theirs:
            if unit.alive:
                _act_opponent(state, unit)
        _resolve_collisions(state.ours + state.theirs)
        state.frame += 1
        ours_alive = any(u.alive for u in state.ours)
        theirs_alive = any(u.alive for u in state.theirs)
        if not ours_alive or not theirs_alive:
            if ours_alive:
                state.outcome = "win"
            elif theirs_alive:
                state.outcome = "loss"
            else:
                state.outcome = "draw"
            break
        if state.frame >= state.config.frame_cap:
            state.outcome = "draw"
            break

    reward = (
        state.team_health(TEAM_OURS) - our_before
        + their_before - state.team_health(TEAM_THEIRS)
    ) / state.our_health0
    return reward, state.done, state.outcome


def build_battle_constraints(state: BattleState):
    """Capacity = enemy remaining health; contribution = our unit's
    damage per attack. Dead units contribute/absorb nothing."""
    from ..assign import ConstraintSet

    mu = np.array([
        [u.spec.damage_per_attack if u.alive else 0.0 for _ in state.theirs]
        for u in state.ours
    ])
    u_vec = np.array([e.health for e in state.theirs])
    return ConstraintSet(mu, u_vec)


def frame_record(state: BattleState) -> dict:
    """One replay record: everything needed to redraw the frame."""
    def unit_row(u):
        return {
            "uid": u.uid,
            "spec": u.spec.name,
            "pos": [round(float(u.pos[0]), 6), round(float(u.pos[1]), 6)],
            "health": round(float(u.health), 6),
            "target": u.current_target,
        }
    return {
        "frame": state.frame,
        "ours": [unit_row(u) for u in state.ours],
        "theirs": [unit_row(u) for u in state.theirs],
    }


def dump_replay(path, records):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


# ---------------------------------------------------------------------------
# Scenario files

SCENARIO_DIR = Path(__file__).parent / "scenarios"


def load_spec(entry: dict) -> UnitSpec:
    return UnitSpec(
        name=entry["name"],
        max_health=float(entry["max_health"]),
        damage_per_attack=float(entry["damage_per_attack"]),
        cooldown_frames=int(entry["cooldown_frames"]),
        attack_range=float(entry["attack_range"]),
        speed=float(entry["speed"]),
        is_flying=bool(entry["is_flying"]),
        type_id=int(entry["type_id"]),
        radius=float(entry.get("radius", 0.75)),
    )


def load_scenario(name_or_path, seed: int = 0) -> BattleConfig:
    """Load a scenario JSON: {"version": 1, "specs": {...}, "ours": [...],
    "theirs": [...]} where team lists reference spec names."""
    path = Path(name_or_path)
    if not path.exists():
        path = SCENARIO_DIR / f"{name_or_path}.json"
    if not path.exists():
        raise BattleError(f"scenario not found: {name_or_path}")
    data = json.loads(path.read_text())
    if data.get("version") != 1:
        raise BattleError(f"unsupported scenario version {data.get('version')}")
    specs = {name: load_spec({"name": name, **entry})
             for name, entry in data["specs"].items()}
    try:
        ours = [specs[n] for n in data["ours"]]
        theirs = [specs[n] for n in data["theirs"]]
    except KeyError as exc:
        raise BattleError(f"scenario references unknown spec {exc}") from exc
    return BattleConfig(ours=ours, theirs=theirs, seed=seed)
