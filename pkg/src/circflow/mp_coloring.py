"""Edge colorings of the expanded counterexample family.

M_p' gets a (4p+1)-coloring in which every vertex sees every color an odd
number of times, assembled per copy from the rotational 1-factorization of
K_{4p}, a triangle recoloring, a recoloring of the junction circuit, and a
per-copy palette rotation that gives junction i the odd color window
i + {1, 3, ..., 4t+7}.  Routing the three same-colored edges at each
junction through a throwaway divalent vertex then yields the (4p+1)-regular
class-1 refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import families
from .colorings import EdgeColoring, PROPER, SEES_ODD, ColoringError, is_proper, sees_odd_violation
from .multigraph import Multigraph, expand_vertex, suppress_divalent_with_map

INF = "inf"


def _half(t: int) -> int:
    # inverse of 2 modulo 8t+3
    return (8 * t + 4) // 2


def k4p_factorization_labels(t: int) -> list[list[tuple]]:
    """The rotational 1-factorization of K_{4p} on Z_{8t+3} + {inf}.

    Color class j is M_j = M_0 + j = {(j, inf)} + {(j-i, j+i)}; the 8t+3
    classes partition the edge set.
    """
    if t < 1:
        raise ColoringError("t must be a positive integer")
    mod = 8 * t + 3
    out = []
    for j in range(mod):
        matching = [(j % mod, INF)]
        for i in range(1, 4 * t + 2):
            matching.append(((j - i) % mod, (j + i) % mod))
        out.append(matching)
    return out


def k4p_one_factorization(t: int) -> list[frozenset[str]]:
    """The same factorization as edge-id sets of complete_graph(4p)."""
    p = 2 * t + 1
    to_j = families.lemma_to_construction_label(p)
    out = []
    for matching in k4p_factorization_labels(t):
        ids = []
        for a, b in matching:
            ja, jb = sorted((to_j[a], to_j[b]))
            ids.append(f"v{ja}v{jb}")
        out.append(frozenset(ids))
    return out


def factor_color_of_pair(t: int, a, b) -> int:
    """Factorization color of the K_{4p} edge between two labels."""
    mod = 8 * t + 3
    if a == INF:
        return b % mod
    if b == INF:
        return a % mod
    return ((a + b) * _half(t)) % mod


def junction_circuit_labels(t: int) -> list:
    """The even circuit 0, 1, .., t+1, inf, -(t+1), .., -1 of length 2t+4."""
    mod = 8 * t + 3
    seq: list = list(range(t + 2)) + [INF]
    seq.extend((-(t + 1) + k) % mod for k in range(t + 1))
    return seq


def triangle_circuit_labels(t: int, j: int) -> list[int]:
    """The 6-circuit pairing triangle j with its negative."""
    mod = 8 * t + 3
    return [(t + 2 + j) % mod, (-(t + 2 + j)) % mod, (t + 3 + j) % mod,
            (-(t + 4 + j)) % mod, (t + 4 + j) % mod, (-(t + 3 + j)) % mod]


def derive_triangle_pattern(t: int, j: int) -> dict[tuple, int]:
    """Triangle-edge colors forced by "every vertex sees each color once".

    Each triangle vertex misses exactly the two old colors of its circuit
    edges, so its two triangle edges must supply them; the resulting
    assignment is unique and comes out independent of j.
    """
    mod = 8 * t + 3
    circuit = triangle_circuit_labels(t, j)
    freed: dict[int, set[int]] = {}
    for k, v in enumerate(circuit):
        w = circuit[(k + 1) % 6]
        col = factor_color_of_pair(t, v, w)
        freed.setdefault(v, set()).add(col)
        freed.setdefault(w, set()).add(col)
    pos = [(t + 2 + j) % mod, (t + 3 + j) % mod, (t + 4 + j) % mod]
    neg = [(-(t + 2 + j)) % mod, (-(t + 3 + j)) % mod, (-(t + 4 + j)) % mod]
    out: dict[tuple, int] = {}
    for tri in (pos, neg):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])):
            common = freed[a] & freed[b]
            if len(common) != 1:
                raise ColoringError("triangle recoloring is not uniquely determined")
            out[(a, b)] = next(iter(common))
    return out


@dataclass(frozen=True)
class MpPrimeColoringData:
    t: int
    family: families.MpFamily
    coloring: EdgeColoring
    copy_permutations: tuple[dict[int, int], ...]  # raw color -> final color per copy


def _copy_edge_ids(p: int, i: int):
    """Edge-id helpers for copy i of M_p' (ids survive the expansion)."""
    def k_edge(a: int, b: int) -> str:
        a, b = sorted((a, b))
        return f"K{i}:v{a}v{b}"

    def t_edge(a: int, b: int) -> str:
        a, b = sorted((a, b))
        return f"T{i}:v{a}v{b}"

    def spoke(side: int, j: int) -> str:
        # side 1 joins c_i, side 2 joins c_{i+1}; the expanded vertex keeps
        # the first parallel edge from each bundle
        if j == 4 * p:
            return f"pz{side}{i}:1"
        return f"s{side}{i}:v{j}"

    return k_edge, t_edge, spoke


def mp_prime_coloring(t: int) -> MpPrimeColoringData:
    """The (4p+1)-coloring of M_p' with every vertex seeing every color an
    odd number of times; verified before returning."""
    if t < 1:
        raise ColoringError("t must be a positive integer")
    p = 2 * t + 1
    family = families.mp_graph(p, families.MP_PRIME)
    g = family.graph
    mod = 8 * t + 3
    palette = 8 * t + 5
    to_j = families.lemma_to_construction_label(p)
    copies = 4 * p + 1

    colors: dict[str, int] = {}
    permutations: list[dict[int, int]] = []
    circuit = junction_circuit_labels(t)
    clen = len(circuit)

    for i in range(1, copies + 1):
        k_edge, t_edge, spoke = _copy_edge_ids(p, i)
        raw: dict[str, int] = {}

        # (a) factorization colors on all K-edges of the copy
        for j, matching in enumerate(k4p_factorization_labels(t)):
            for a, b in matching:
                raw[k_edge(to_j[a], to_j[b])] = j

        # (b) triangle circuits: new colors on the circuit, freed colors on
        # the triangle edges
        for jj in range(0, 3 * t, 3):
            tri_circuit = triangle_circuit_labels(t, jj)
            for k, v in enumerate(tri_circuit):
                w = tri_circuit[(k + 1) % 6]
                raw[k_edge(to_j[v], to_j[w])] = mod if k % 2 == 0 else mod + 1
            for (a, b), col in derive_triangle_pattern(t, jj).items():
                raw[t_edge(to_j[a], to_j[b])] = col

        # (c) junction circuit: remember the freed colors in circuit order,
        # recolor the circuit alternately, hand each vertex's forward color
        # to c_i and its backward color to c_{i+1}
        freed: list[int] = []
        for k in range(clen):
            v, w = circuit[k], circuit[(k + 1) % clen]
            freed.append(factor_color_of_pair(t, v, w))
        if len(set(freed)) != clen:
            raise ColoringError("junction circuit colors are not pairwise distinct")
        for k in range(clen):
            v, w = circuit[k], circuit[(k + 1) % clen]
            raw[k_edge(to_j[v], to_j[w])] = mod if k % 2 == 0 else mod + 1
        for k, v in enumerate(circuit):
            raw[spoke(1, to_j[v])] = freed[k]
            raw[spoke(2, to_j[v])] = freed[(k - 1) % clen]

        # (d) per-copy palette rotation: freed set -> i + {1, 3, .., 4t+7},
        # the rest order-preserving
        window = sorted((i + 2 * s + 1) % palette for s in range(2 * t + 4))
        perm: dict[int, int] = {}
        for old, new in zip(sorted(freed), window):
            perm[old] = new
        rest_old = [c for c in range(palette) if c not in perm]
        rest_new = [c for c in range(palette) if c not in set(window)]
        perm.update(dict(zip(rest_old, rest_new)))
        permutations.append(perm)
        for eid, c in raw.items():
            colors[eid] = perm[c]

        # (e) the p-2 parallel junction edges get the even window
        bundle = sorted([f"zz{i}"] + [f"pz1{i}:{k}&pz2{i}:{k}" for k in range(2, p - 1)])
        even_window = sorted((i + 4 * t + 8 + 2 * s) % palette for s in range(2 * t - 1))
        for eid, c in zip(bundle, even_window):
            colors[eid] = c

        # (f) hub spoke
        colors[f"hub{i}"] = (i + 4 * t + 7) % palette

    coloring = EdgeColoring(colors, palette, SEES_ODD)
    bad = sees_odd_violation(g, coloring)
    if bad is not None:
        raise ColoringError(f"internal error: sees-odd violated at {bad}")
    # sharper structural checks than bare parity
    for v in g.vertices:
        counts: dict[int, int] = {}
        for eid in g.incident_edges(v):
            counts[colors[eid]] = counts.get(colors[eid], 0) + 1
        if v == family.hub or v not in family.junctions:
            if any(c != 1 for c in counts.values()) or len(counts) != palette:
                raise ColoringError(f"internal error: {v} must see every color once")
        else:
            i = int(v[1:])
            triple = (i + 4 * t + 7) % palette
            for c in range(palette):
                want = 3 if c == triple else 1
                if counts.get(c) != want:
                    raise ColoringError(f"internal error: junction {v} sees {c} wrongly")
    return MpPrimeColoringData(t, family, coloring, tuple(permutations))


def mp_tilde_coloring(t: int) -> tuple[Multigraph, EdgeColoring]:
    """Expand each junction so the triple color's surplus leaves through a
    divalent vertex, suppress, and return the proper (4p+1)-coloring."""
    data = mp_prime_coloring(t)
    p = 2 * t + 1
    palette = 8 * t + 5
    family = data.family
    g = family.graph
    colors = dict(data.coloring.colors)

    for i in range(1, 4 * p + 2):
        v = f"c{i}"
        triple = (i + 4 * t + 7) % palette
        carriers = [eid for eid in g.incident_edges(v) if colors[eid] == triple]
        if len(carriers) != 3:
            raise ColoringError("internal error: junction must see its triple color thrice")
        hub = f"hub{i}"
        if hub not in carriers:
            raise ColoringError("internal error: the hub edge must carry the triple color")
        rerouted = [eid for eid in carriers if eid != hub]
        replacement = Multigraph([f"c~{i}", f"cdiv{i}"], [])
        attachment = {eid: (f"cdiv{i}" if eid in rerouted else f"c~{i}")
                      for eid in g.incident_edges(v)}
        g = expand_vertex(g, v, replacement, attachment)

    g, merges = suppress_divalent_with_map(g)
    for new_eid, (e1, e2) in merges.items():
        c1, c2 = colors.pop(e1), colors.pop(e2)
        if c1 != c2:
            raise ColoringError("internal error: merged edges carry different colors")
        colors[new_eid] = c1

    coloring = EdgeColoring(colors, palette, PROPER)
    if not g.is_regular(4 * p + 1):
        raise ColoringError("internal error: the refinement is not (4p+1)-regular")
    ok, clash = is_proper(g, coloring)
    if not ok:
        raise ColoringError(f"internal error: refinement coloring improper at {clash}")
    return g, coloring
