"""Reference implementations used to derive expected fixture values.

Written independently of the Rust crate from the documented formats: the mock
embedder's feature scheme, f32 storage with f64 accumulation, greedy
thresholded matching, and the linker's selection rule.
"""

import math
import struct

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK = (1 << 64) - 1


def f32(x):
    return struct.unpack("<f", struct.pack("<f", x))[0]


def fnv1a(seed, data):
    h = FNV_OFFSET
    for b in seed.to_bytes(8, "little") + data:
        h ^= b
        h = (h * FNV_PRIME) & MASK
    return h


def _is_alnum(c):
    return c.isalpha() or c.isnumeric()


def mock_embed(text, dim=256, seed=0):
    if not text.strip():
        raise ValueError("empty text")
    lower = text.lower()
    v = [0.0] * dim

    def add(kind, feature):
        h = fnv1a(seed, bytes([kind]) + feature.encode("utf-8"))
        v[h % dim] += -1.0 if h >> 63 else 1.0

    padded = " " + lower + " "
    for n in (3, 4):
        for i in range(len(padded) - n + 1):
            add(n, padded[i : i + n])
    word = []
    for c in lower + " ":
        if _is_alnum(c):
            word.append(c)
        elif word:
            add(0, "".join(word))
            word = []
    acc = 0.0
    for x in v:
        acc += x * x
    norm = math.sqrt(acc)
    if norm > 0:
        v = [f32(x / norm) for x in v]
    return v


def dot(a, b):
    acc = 0.0
    for x, y in zip(a, b):
        acc += x * y
    return acc


def cosine(a, b):
    na = math.sqrt(dot(a, a))
    nb = math.sqrt(dot(b, b))
    return max(-1.0, min(1.0, dot(a, b) / (na * nb)))


def greedy_match(e1, e2, threshold, k):
    """e1, e2: lists of (id, vector). Brute-force all pairs, top-k per query
    with ties to the lower index, first unclaimed candidate above threshold."""
    taken = [False] * len(e2)
    pairs, removed = [], []
    for id1, v1 in e1:
        sims = [(cosine(v1, v2), j) for j, (_, v2) in enumerate(e2)]
        sims.sort(key=lambda t: (-t[0], t[1]))
        pick = None
        for s, j in sims[:k]:
            if s >= threshold and not taken[j]:
                pick = (j, s)
                break
        if pick is None:
            removed.append(id1)
        else:
            taken[pick[0]] = True
            pairs.append((id1, e2[pick[0]][0], pick[1]))
    added = [e2[j][0] for j in range(len(e2)) if not taken[j]]
    return pairs, removed, added


def baseline_match(e1, e2):
    """e1, e2: lists of (id, headword)."""
    taken = [False] * len(e2)
    pairs, removed = [], []
    for id1, hw in e1:
        pick = next((j for j, (_, h2) in enumerate(e2) if h2 == hw and not taken[j]), None)
        if pick is None:
            removed.append(id1)
        else:
            taken[pick] = True
            pairs.append((id1, e2[pick][0], 1.0))
    added = [e2[j][0] for j in range(len(e2)) if not taken[j]]
    return pairs, removed, added


def prf(correct, predicted, gold):
    p = correct / predicted if predicted else 0.0
    r = correct / gold if gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def match_f1(pairs, gold):
    """gold: dict e1 -> e2 or None."""
    in_sample = [(a, b) for a, b, _ in pairs if a in gold]
    correct = sum(1 for a, b in in_sample if gold[a] == b)
    gold_pos = sum(1 for v in gold.values() if v is not None)
    return prf(correct, len(in_sample), gold_pos)


def pick_link(entry_text, candidates, threshold, dim=256, seed=0):
    """candidates: dicts with qid, description, coords (or None).
    Returns (qid, coords, sim) or None, plus the best similarity seen."""
    scored = [c for c in candidates if c["description"].strip()]
    if not scored:
        return None, None
    q = mock_embed(entry_text, dim, seed)
    best, best_sim = None, None
    for c in scored:
        s = cosine(q, mock_embed(c["description"], dim, seed))
        if best_sim is None or s > best_sim:
            best, best_sim = c, s
    if best_sim >= threshold and best["coords"] is not None:
        return (best, best_sim), best_sim
    return None, best_sim
