import numpy as np
import pytest

from rai.ingest import IngestError, build_movielens_instance, parse_ratings, top_items
from rai.instance import ClusterSpec, RequirementSpec, task_preset

HEAD = "userId,movieId,rating,timestamp\n"


def write(tmp_path, body, name="r.csv", header=HEAD):
    path = tmp_path / name
    path.write_text(header + body)
    return path


def test_parse_two_rows(tmp_path):
    table = parse_ratings(write(tmp_path, "1,10,4.0,100\n2,10,5.0,101\n"), 5.0)
    assert len(table) == 2
    assert table.items.tolist() == [10, 10]
    assert table.ratings.tolist() == [4.0, 5.0]
    assert table.n_items == 1


def test_parse_crlf_and_blank_lines(tmp_path):
    path = tmp_path / "crlf.csv"
    path.write_bytes(b"userId,movieId,rating,timestamp\r\n1,10,4.0,1\r\n\r\n2,11,3.5,2\r\n")
    table = parse_ratings(path, 5.0)
    assert table.items.tolist() == [10, 11]


@pytest.mark.parametrize(
    "header,body,match",
    [
        (HEAD, "", "no records"),
        ("user,movie,rating,ts\n", "1,10,4.0,1\n", "header"),
        ("", "", "header"),
        (HEAD, "1,10,4.0,1\n2,10,6.0,2\n", ":3:"),
        (HEAD, "1,10,0,1\n", "outside"),
        (HEAD, "1,10,abc,1\n", "non-numeric"),
        (HEAD, "1,10,4.0\n", "4 fields"),
        (HEAD, "x,10,4.0,1\n", "non-integer"),
    ],
)
def test_parse_errors(tmp_path, header, body, match):
    with pytest.raises(IngestError, match=match):
        parse_ratings(write(tmp_path, body, header=header), 5.0)


def test_parse_missing_file(tmp_path):
    with pytest.raises(IngestError):
        parse_ratings(tmp_path / "nope.csv")
    with pytest.raises(IngestError):
        parse_ratings(write(tmp_path, "1,1,1,1\n"), 0)


def counts_file(tmp_path):
    rows = []
    for item, count, rating in ((1, 100, 4.0), (2, 50, 3.0), (3, 10, 5.0)):
        rows += [f"{u},{item},{rating},0\n" for u in range(count)]
    return write(tmp_path, "".join(rows))


def test_top_items_by_count(tmp_path):
    items = top_items(parse_ratings(counts_file(tmp_path), 5.0), 2)
    assert [s.item_id for s in items] == [1, 2]
    assert [s.count for s in items] == [100, 50]
    with pytest.raises(IngestError):
        top_items(parse_ratings(counts_file(tmp_path), 5.0), 4)


def test_top_items_normalised_mean(tmp_path):
    items = top_items(parse_ratings(write(tmp_path, "1,7,4.0,0\n2,7,5.0,0\n"), 5.0), 1)
    assert items[0].mean == pytest.approx(0.9)
    assert items[0].mean == float(np.mean(items[0].ratings))


def test_count_ties_prefer_smaller_id(tmp_path):
    body = "1,9,1.0,0\n1,4,2.0,0\n1,6,3.0,0\n2,6,3.0,0\n"
    items = top_items(parse_ratings(write(tmp_path, body), 5.0), 2)
    assert {s.item_id for s in items} == {6, 4}


def test_fixture_top10_sorted_and_stable(ratings_path):
    table = parse_ratings(ratings_path, 5.0)
    assert len(table) == 200
    first = top_items(table, 10)
    again = top_items(parse_ratings(ratings_path, 5.0), 10)
    assert [s.item_id for s in first] == [s.item_id for s in again]
    means = [s.mean for s in first]
    assert means == sorted(means, reverse=True)
    assert len(set(means)) == 10


def test_build_coarse_ranking_roundtrip(ratings_path):
    items = top_items(parse_ratings(ratings_path, 5.0), 10)
    clusters, req = task_preset("coarse-ranking", 10, ratios=(3, 5, 2))
    inst, env = build_movielens_instance(items, clusters, req)
    assert inst.sizes == (3, 5, 2) and inst.required == (3, 5, 2)
    assert env.family == "empirical"
    for mu, s, arm in zip(inst.flat_means, items, env.arms):
        assert abs(mu - float(np.mean(s.ratings))) < 1e-12
        assert np.array_equal(arm.atoms, s.ratings)


def test_build_m_of_top_k(ratings_path):
    items = top_items(parse_ratings(ratings_path, 5.0), 10)
    inst, _ = build_movielens_instance(items, *task_preset("m-of-top-k", 10, 5, 2))
    assert inst.sizes == (5, 5) and inst.required == (2, 0)


def test_boundary_tie_rejected(tmp_path):
    body = "1,1,4.0,0\n2,1,4.0,0\n1,2,4.0,0\n2,2,4.0,0\n"
    items = top_items(parse_ratings(write(tmp_path, body), 5.0), 2)
    with pytest.raises(IngestError, match="items 1 and 2"):
        build_movielens_instance(items, ClusterSpec((1, 1)), RequirementSpec((1, 0)))
    # the same tie inside one cluster is harmless
    inst, _ = build_movielens_instance(items, ClusterSpec((2,)), RequirementSpec((1,)))
    assert inst.flat_means == (0.8, 0.8)


def test_build_size_mismatch(ratings_path):
    items = top_items(parse_ratings(ratings_path, 5.0), 10)
    with pytest.raises(IngestError):
        build_movielens_instance(items, ClusterSpec((5, 4)), RequirementSpec((1, 0)))
    with pytest.raises(IngestError):
        build_movielens_instance(items[::-1], ClusterSpec((5, 5)), RequirementSpec((1, 0)))
