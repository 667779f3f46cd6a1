from lexplace.generate import instance_hash, random_multitree
from lexplace.graph import is_multitree, is_untangled


def test_generator_certifies_instances():
    for seed in range(40):
        k = 1 + seed % 4
        g = random_multitree(k, 20, seed, merges=60)
        assert len(g) == 20
        assert g.root_mask.bit_count() == k
        assert is_multitree(g) and is_untangled(g)


def test_generator_is_seeded():
    assert instance_hash(random_multitree(3, 25, 9)) == instance_hash(random_multitree(3, 25, 9))
    assert instance_hash(random_multitree(3, 25, 9)) != instance_hash(random_multitree(3, 25, 10))


def test_generator_creates_connectors():
    assert any(random_multitree(3, 20, s).connector_mask for s in range(10))
