import random

import pytest

from ressynth.attack import compose, damage_reachable
from ressynth.automata import Fsa
from ressynth.encoding import attacker_assignment, supervisor_assignment
from ressynth.named import (
    alternating_supervisor,
    b_only_supervisor,
    inst1,
    inst2,
    memory_instance,
)
from ressynth.oracle import oracle_synthesize, resists_all
from ressynth.sat import SolverConfig
from ressynth.solve import (
    CegisExhausted,
    DecodeError,
    bound_schedule,
    decode_attacker,
    decode_supervisor,
    find_attacker,
    synthesize_cegis,
    synthesize_direct,
)
from ressynth.supervision import enumerate_supervisors
from support import corpus, random_attacker, random_supervisor


def test_decode_round_trip_supervisors():
    rng = random.Random(3)
    items = corpus()
    for _ in range(60):
        _, inst = rng.choice(items)
        n = rng.randint(1, 3)
        sup = random_supervisor(rng, n, inst.control)
        values = supervisor_assignment(sup, n, inst.control, inst.attack)
        assert decode_supervisor(values, n, inst.control, inst.attack) == sup


def test_decode_round_trip_attackers():
    rng = random.Random(4)
    items = corpus()
    for _ in range(60):
        _, inst = rng.choice(items)
        m = rng.randint(1, 3)
        atk = random_attacker(rng, m, inst.attack, inst.observations)
        values = attacker_assignment(atk, inst.observations)
        for k in range(m):
            for ev in inst.attack.compromised:
                values[("e", k, ev)] = ev in atk.output[k]
        back = decode_attacker(values, m, inst.observations, inst.attack, inst.alphabet)
        assert back.trans == atk.trans and back.output == atk.output


def test_decode_rejects_non_functional_models():
    inst = inst2()
    values = supervisor_assignment(b_only_supervisor(), 1, inst.control, inst.attack)
    values[("t", 0, "b", 2)] = True
    with pytest.raises(DecodeError, match="2 successors"):
        decode_supervisor(values, 1, inst.control, inst.attack)


def test_named_instances():
    i1 = inst1()
    for n in (1, 2, 3):
        assert not synthesize_direct(i1.with_bounds(n=n)).found
    found = synthesize_direct(inst2())
    assert found.found and found.supervisor == b_only_supervisor()
    mem = memory_instance()
    assert not synthesize_direct(mem).found
    two = synthesize_direct(mem.with_bounds(n=2))
    assert two.found and two.supervisor == alternating_supervisor()


def test_named_instances_against_brute_force():
    for inst in (inst1(), inst2(), memory_instance(), memory_instance(n=2)):
        got = synthesize_direct(inst)
        oracle = oracle_synthesize(inst, inst.n, 1)
        assert got.found == (oracle is not None)
        if got.found:
            assert resists_all(got.supervisor, inst, 1)


def test_cegis_matches_direct_and_stays_short():
    for inst in (inst1(), inst2(), memory_instance(), memory_instance(n=2)):
        d = synthesize_direct(inst)
        c = synthesize_cegis(inst)
        assert c.found == d.found
        assert c.stats.sat_calls <= 2


def test_cegis_exhaustion_is_reported():
    with pytest.raises(CegisExhausted) as info:
        synthesize_cegis(memory_instance(), max_iters=1)
    assert info.value.candidate is not None and len(info.value.counterexamples) == 1
    with pytest.raises(ValueError):
        synthesize_cegis(inst2(), max_iters=0)


def test_bound_schedule_stops_at_first_success():
    out = bound_schedule(memory_instance(), 3)
    assert out.found and out.n == 2
    assert [(n, v) for n, v, _ in out.stats.per_bound] == [(1, "not-found"), (2, "found")]
    out = bound_schedule(inst1(), 2, method="cegis")
    assert not out.found and len(out.stats.per_bound) == 2
    with pytest.raises(ValueError):
        bound_schedule(inst1(n=2), 1)


def test_synthesis_is_deterministic():
    runs = [synthesize_direct(memory_instance(n=2)).supervisor for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]
    py = synthesize_direct(memory_instance(n=2), SolverConfig(backend="python")).supervisor
    assert py == runs[0]


def test_find_attacker_fast_and_general_agree():
    rng = random.Random(77)
    items = corpus()
    disagreements = 0
    for _ in range(100):
        _, inst = rng.choice(items)
        sup = random_supervisor(rng, rng.randint(1, 2), inst.control)
        fast = find_attacker(sup, inst)
        general = find_attacker(sup, inst, m=1, general=True)
        if (fast is None) != (general is None):
            disagreements += 1
        for atk in (fast, general):
            if atk is not None:
                loop = compose(atk, sup, inst.plant, inst.damage, inst.control, inst.attack)
                assert damage_reachable(loop)
    assert disagreements == 0


def test_find_attacker_general_with_memory():
    inst = memory_instance(m=2)
    only_b = Fsa(("x0",), ("a", "b"), {("x0", "a"): "x0", ("x0", "b"): "x0"}, "x0")
    atk = find_attacker(only_b, inst, general=True, max_steps=3)
    assert atk is not None and atk.size == 2
    assert find_attacker(alternating_supervisor(), inst, general=True) is None


def test_find_attacker_rejects_covert():
    with pytest.raises(ValueError, match="risky"):
        find_attacker(b_only_supervisor(), inst2(), semantics="covert")


def test_found_supervisors_resist_sampled_attackers():
    inst = inst2(m=2)
    sup = synthesize_direct(inst).supervisor
    assert find_attacker(sup, inst, general=True) is None
    rng = random.Random(1)
    for _ in range(500):
        atk = random_attacker(rng, rng.randint(1, 3), inst.attack, inst.observations)
        loop = compose(atk, sup, inst.plant, inst.damage, inst.control, inst.attack)
        assert not damage_reachable(loop)


def test_every_single_state_supervisor_of_inst1_is_attackable():
    inst = inst1()
    for sup in enumerate_supervisors(1, inst.control):
        assert find_attacker(sup, inst) is not None

