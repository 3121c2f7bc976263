"""Regenerates everything under fixtures/ except tools/.

    python3 fixtures/tools/make_fixtures.py

Deterministic: the same inputs give byte-identical files. Expected values
(entry lists, links, match scores) come from the reference code in
oracle.py, never from the Rust crate.
"""

import hashlib
import html
import json
import os
import random
import shutil
import sys
import urllib.parse

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, HERE)

from corpus_data import (  # noqa: E402
    DISTRACTORS,
    EMPTY_SEARCHES,
    PAGES,
    PLACES,
    REFERENT_FIRST,
    VOLUME_LETTERS,
)
from oracle import baseline_match, cosine, greedy_match, match_f1, mock_embed, pick_link  # noqa: E402

ROOT = os.path.dirname(HERE)
ED_NUM = {"first": 1, "second": 2}
TRUNC = 200
LINK_THRESHOLD = 0.6
SEARCH_K = 5
WD = "https://www.wikidata.org/w/api.php"
WP = "https://sv.wikipedia.org/w/api.php"
EARTH = "http://www.wikidata.org/entity/Q2"


def dump_jsonl(path, rows):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")


def write_text(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def strip_trailing(s):
    return s.rstrip(".,:; \t")


def classifier_headword(text):
    cut = min([i for i in (text.find("."), text.find(","), text.find("(")) if i >= 0] or [len(text)])
    return strip_trailing(text[:cut].strip())


def entry_json(e, is_location=False):
    return {
        "id": e["id"],
        "edition": e["edition"],
        "volume_id": e["volume"],
        "page_id": e["page"],
        "headword": e["headword"],
        "text": e["text"],
        "truncated_text": e["text"][:TRUNC],
        "strategy": e["strategy"],
        "flags": {"is_crossref": False, "crossref_target": None, "is_location": is_location},
    }


# ---------------------------------------------------------------- corpus


def rendered(paras):
    """Paragraphs that appear in the OCR text region, in order."""
    return [p for p in paras if p[0] != "X"]


def page_html(paras):
    index = [p[2] for p in paras if p[0] == "I"] + [p[1] for p in paras if p[0] == "X"]
    out = ["<html><body>"]
    if index:
        out.append("<!-- index -->")
        out.append("<ul>" + "".join(f"<li>{html.escape(w, quote=False)}</li>" for w in sorted(index)) + "</ul>")
        out.append("<!-- /index -->")
    out.append("<!-- mode=normal -->")
    for p in rendered(paras):
        if p[0] == "B":
            out.append(f"<p><b>{html.escape(p[1], quote=False)}</b> {html.escape(p[2], quote=False)}</p>")
        else:
            out.append(f"<p>{html.escape(p[1], quote=False)}</p>")
    out.append("<!-- NEWIMAGE2 -->")
    out.append("</body></html>")
    return "\n".join(out) + "\n"


def place_of(p):
    kind = p[0]
    if kind in ("B", "I"):
        return p[3] if len(p) > 3 else None
    if kind == "C":
        return p[2] if len(p) > 2 else None
    return None


def expected_entries():
    """Oracle segmentation from the paragraph annotations."""
    entries = []
    counts = {}
    by_volume = {}
    for key in sorted(PAGES, key=lambda k: (ED_NUM[k[0]], k[1], k[2])):
        by_volume.setdefault((key[0], key[1]), []).append(key)
    for (ed, vol), keys in by_volume.items():
        current = None
        for key in keys:
            for idx, p in enumerate(rendered(PAGES[key])):
                kind = p[0]
                if kind in ("B", "I", "C"):
                    if kind == "B":
                        hw, text, strategy = strip_trailing(p[1].strip()), p[1] + " " + p[2], "bold"
                    elif kind == "I":
                        hw, text, strategy = strip_trailing(p[2]), p[1], "index"
                    else:
                        hw, text, strategy = classifier_headword(p[1]), p[1], "classifier"
                    current = {
                        "id": f"{ED_NUM[ed]}:{vol}:{key[2]}:{idx}",
                        "edition": ed,
                        "volume": vol,
                        "page": key[2],
                        "headword": hw,
                        "text": text,
                        "strategy": strategy,
                        "place": place_of(p),
                    }
                    entries.append(current)
                    counts[(ed, strategy)] = counts.get((ed, strategy), 0) + 1
                elif kind in ("T", "S"):
                    assert current is not None, (key, p)
                    current["text"] += " " + p[1]
                    counts[(ed, "continuation")] = counts.get((ed, "continuation"), 0) + 1
                    if kind == "S":
                        counts[(ed, "subentry")] = counts.get((ed, "subentry"), 0) + 1
                elif kind == "O":
                    assert current is None, (key, p)
                    counts[(ed, "orphan")] = counts.get((ed, "orphan"), 0) + 1
    return entries, counts


def is_crossref_text(text):
    return len(text) < 60 and " Se " in text


def write_corpus(entries, counts):
    base = os.path.join(ROOT, "corpus")
    shutil.rmtree(base, ignore_errors=True)
    manifest = []
    for key in sorted(PAGES, key=lambda k: (ED_NUM[k[0]], k[1], k[2])):
        ed, vol, page = key
        rel = f"{ed}/{vol}/{page}.html"
        write_text(os.path.join(base, rel), page_html(PAGES[key]))
        manifest.append({"edition": ed, "volume": vol, "page": page, "path": rel})
    dump_jsonl(os.path.join(base, "manifest.jsonl"), manifest)

    seg = os.path.join(ROOT, "segment")
    dump_jsonl(os.path.join(seg, "gold.jsonl"), [{"id": e["id"], "headword": e["headword"]} for e in entries])
    dump_jsonl(
        os.path.join(seg, "expected_entries.jsonl"),
        [{"id": e["id"], "headword": e["headword"], "strategy": e["strategy"], "text": e["text"]} for e in entries],
    )
    stats = {}
    for ed in ("first", "second"):
        stats[ed] = {
            k: counts.get((ed, k), 0)
            for k in ("bold", "index", "classifier", "continuation", "orphan", "subentry")
        }
    write_text(os.path.join(seg, "expected_counts.json"), json.dumps(stats, indent=2, sort_keys=True) + "\n")
    n_paras = sum(len(rendered(p)) for p in PAGES.values())
    assert len(PAGES) == 12 and n_paras >= 30
    assert all(stats[ed][s] > 0 for ed in ("first", "second") for s in ("bold", "index"))
    assert stats["second"]["classifier"] > 0

    # Pipeline-level gold for eval.
    dump_jsonl(
        os.path.join(ROOT, "gold", "crossref.jsonl"),
        [{"entry_id": e["id"], "label": is_crossref_text(e["text"])} for e in entries],
    )
    dump_jsonl(
        os.path.join(ROOT, "gold", "locations.jsonl"),
        [{"entry_id": e["id"], "label": e["place"] is not None and not is_crossref_text(e["text"])} for e in entries],
    )
    gold_links = []
    for e in entries:
        if e["place"] is None or is_crossref_text(e["text"]):
            continue
        qid, *_, coords, _cc = PLACES[e["place"]]
        if coords is not None:
            gold_links.append({"entry_id": e["id"], "qid": qid, "lat": coords[0], "lon": coords[1]})
    dump_jsonl(os.path.join(ROOT, "gold", "links.jsonl"), gold_links)

    # Cross-edition pairs by headword; the one spelling reform is annotated.
    reform = {"Qvenneberga": "Kvenneberga"}
    second = [e for e in entries if e["edition"] == "second" and not is_crossref_text(e["text"])]
    match_gold = []
    for e in entries:
        if e["edition"] != "first" or is_crossref_text(e["text"]):
            continue
        hw = reform.get(e["headword"], e["headword"])
        partner = next((s["id"] for s in second if s["headword"] == hw), None)
        match_gold.append({"e1_id": e["id"], "e2_id": partner})
    dump_jsonl(os.path.join(ROOT, "gold", "match.jsonl"), match_gold)


# ---------------------------------------------------------------- wiki


def encode(s):
    return urllib.parse.quote(s, safe="-_.~")


def search_url(q, k):
    return (
        f"{WD}?action=wbsearchentities&format=json&language=sv&uselang=sv&type=item"
        f"&limit={k}&search={encode(q)}"
    )


def entity_url(qid):
    return (
        f"{WD}?action=wbgetentities&format=json&ids={qid}"
        "&props=labels%7Csitelinks%7Cdescriptions%7Cclaims&sitefilter=svwiki&languages=sv"
    )


def extract_url(title):
    return (
        f"{WP}?action=query&format=json&prop=extracts&exintro=1&explaintext=1&redirects=1"
        f"&titles={encode(title)}"
    )


class Store:
    def __init__(self, path):
        self.path = path
        self.records = {}
        shutil.rmtree(path, ignore_errors=True)

    def put(self, url, body):
        request = f"GET {url}"
        key = hashlib.sha256(request.encode()).hexdigest()
        text = json.dumps(body, ensure_ascii=False, separators=(",", ":"))
        if key in self.records:
            assert self.records[key][1] == text, url
        self.records[key] = (request, text)

    def write(self):
        rows = []
        for key in sorted(self.records):
            request, text = self.records[key]
            write_text(os.path.join(self.path, f"{key}.body"), text)
            rows.append({"key": key, "request": request, "file": f"{key}.body"})
        dump_jsonl(os.path.join(self.path, "index.jsonl"), rows)


def items():
    """qid -> (label, title, extract, description, coords)."""
    out = {}
    for key, (qid, label, title, extract, desc, coords, _cc) in PLACES.items():
        out[qid] = (label, title, extract, desc, coords, key)
    for hits in DISTRACTORS.values():
        for qid, label, title, extract, desc, coords in hits:
            out[qid] = (label, title, extract, desc, coords, None)
    return out


def entity_body(qid, item):
    label, title, _extract, desc, coords, key = item
    ent = {
        "type": "item",
        "id": qid,
        "labels": {"sv": {"language": "sv", "value": label}},
        "descriptions": {"sv": {"language": "sv", "value": desc}} if desc else {},
        "sitelinks": {"svwiki": {"site": "svwiki", "title": title, "badges": []}} if title else {},
        "claims": {},
    }
    if coords is not None:
        ent["claims"]["P625"] = [
            {
                "mainsnak": {
                    "snaktype": "value",
                    "property": "P625",
                    "datavalue": {
                        "value": {
                            "latitude": coords[0],
                            "longitude": coords[1],
                            "altitude": None,
                            "precision": 0.0001,
                            "globe": EARTH,
                        },
                        "type": "globecoordinate",
                    },
                    "datatype": "globe-coordinate",
                },
                "type": "statement",
                "rank": "normal",
            }
        ]
    elif key == "archangelsk":
        # Coordinate statement with an unknown value: no usable P625.
        ent["claims"]["P625"] = [
            {"mainsnak": {"snaktype": "somevalue", "property": "P625"}, "type": "statement", "rank": "normal"}
        ]
    return {"entities": {qid: ent}, "success": 1}


def search_hits(headword):
    """Search result qids in API order for a headword."""
    if headword in EMPTY_SEARCHES:
        return []
    referent = [PLACES[HEADWORD_PLACE[headword]][0]] if headword in HEADWORD_PLACE else []
    extra = [d[0] for d in DISTRACTORS.get(headword, [])]
    if REFERENT_FIRST.get(headword, True):
        return (referent + extra)[:SEARCH_K]
    return (extra + referent)[:SEARCH_K]


HEADWORD_PLACE = {}


def description_of(item):
    _label, title, extract, desc, _coords, _key = item
    if title and extract:
        return extract.strip()[:200], "wikipedia"
    return (desc or "")[:200], "wikidata_description"


def write_wiki(entries):
    kg = items()
    for e in entries:
        if e["place"] is not None:
            HEADWORD_PLACE[e["headword"]] = e["place"]
    store = Store(os.path.join(ROOT, "wiki"))
    queries = sorted({e["headword"] for e in entries})
    searched = {}
    for q in queries:
        hits = search_hits(q)
        searched[q] = hits
        store.put(
            search_url(q, SEARCH_K),
            {
                "searchinfo": {"search": q},
                "search": [
                    {
                        "id": qid,
                        "title": qid,
                        "label": kg[qid][0],
                        "description": kg[qid][3] or "",
                        "match": {"type": "label", "language": "sv", "text": kg[qid][0]},
                    }
                    for qid in hits
                ],
                "success": 1,
            },
        )
        for qid in hits:
            item = kg[qid]
            store.put(entity_url(qid), entity_body(qid, item))
            title, extract = item[1], item[2]
            if title:
                page_id = str(int(qid[1:]) % 1000003)
                page = {"pageid": int(page_id), "ns": 0, "title": title}
                if extract:
                    page["extract"] = extract
                    pages = {page_id: page}
                else:
                    pages = {"-1": {"ns": 0, "title": title, "missing": ""}}
                store.put(extract_url(title), {"batchcomplete": "", "query": {"pages": pages}})
    store.write()
    return kg, searched


# ---------------------------------------------------------------- linking


def write_linking(entries, kg, searched):
    base = os.path.join(ROOT, "linking")
    loc = [e for e in entries if e["place"] is not None and not is_crossref_text(e["text"])]
    for ed in ("first", "second"):
        assert sum(1 for e in loc if e["edition"] == ed) >= 25, ed
    dump_jsonl(os.path.join(base, "entries.jsonl"), [entry_json(e, True) for e in loc])
    table = ["entry_id\tqid\tlat\tlon\tsimilarity"]
    oracle_rows = []
    report = []
    for e in loc:
        cands = []
        for qid in searched[e["headword"]]:
            desc, _src = description_of(kg[qid])
            cands.append({"qid": qid, "description": desc, "coords": kg[qid][4]})
        picked, best = pick_link(e["text"][:TRUNC], cands, LINK_THRESHOLD)
        truth = PLACES[e["place"]][0]
        if picked is None:
            report.append(f"  {e['id']:12} {e['headword']:14} no link (best {best})")
            continue
        c, sim = picked
        table.append(f"{e['id']}\t{c['qid']}\t{c['coords'][0]:.6f}\t{c['coords'][1]:.6f}\t{sim:.6f}")
        oracle_rows.append({"entry_id": e["id"], "qid": c["qid"], "similarity": sim})
        mark = "" if c["qid"] == truth else "  (not the referent)"
        report.append(f"  {e['id']:12} {e['headword']:14} {c['qid']} {sim:.3f}{mark}")
    write_text(os.path.join(base, "expected_links.tsv"), "\n".join(table) + "\n")
    dump_jsonl(os.path.join(base, "oracle_links.jsonl"), oracle_rows)

    # Designed cases.
    print("\n".join(report))
    by_hw = {(e["edition"], e["headword"]): r for e, r in zip(loc, oracle_rows_by_entry(loc, oracle_rows))}
    oved = by_hw[("first", "Öved")]
    assert oved is not None and oved["qid"] == DISTRACTORS["Öved"][0][0], oved
    assert by_hw[("first", "Qvenneberga")] is None
    assert by_hw[("first", "Kalkutta")] is None
    assert by_hw[("first", "Archangelsk")] is None
    return report


def oracle_rows_by_entry(loc, rows):
    by_id = {r["entry_id"]: r for r in rows}
    return [by_id.get(e["id"]) for e in loc]


# ---------------------------------------------------------------- matching

SYL = ["al", "ber", "by", "da", "e", "fors", "ga", "holm", "i", "ka", "la", "lund", "ma", "ne", "o", "ra",
       "sa", "sta", "ta", "u", "va", "vik", "å", "ö", "rum", "mo", "sund", "näs", "berg", "ham"]
REGIONS = ["Uplands", "Södermanlands", "Östergötlands", "Jönköpings", "Kronobergs", "Kalmar", "Blekinge",
           "Kristianstads", "Malmöhus", "Hallands", "Göteborgs", "Elfsborgs", "Skaraborgs", "Vermlands",
           "Örebro", "Vestmanlands", "Kopparbergs", "Gefleborgs", "Vesternorrlands", "Jemtlands"]
WATERS = ["Vettern", "Venern", "Mälaren", "Hjelmaren", "Storsjön", "Siljan", "Bottniska viken", "Kattegatt"]
PROFESSIONS = ["skald", "målare", "biskop", "fältherre", "botanist", "kemist", "tonsättare", "riksråd",
               "historiker", "arkitekt", "läkare", "skådespelare"]
NATIONS = ["svensk", "norsk", "dansk", "tysk", "fransk", "engelsk", "finsk", "holländsk"]
CONCEPT_HEADS = ["benämning på", "läran om", "konsten att", "ett slags", "sammanfattande namn på",
                 "inom juridiken", "inom musiken", "i botaniken"]
CONCEPT_TAILS = ["de delar af en maskin som leda kraften", "växternas byggnad och lefnad",
                 "bereda läder af djurhudar", "dryckeskärl af tenn eller silfver", "alla arter af släktet",
                 "den rätt som tillkommer arfvingar", "en kort melodi för flera röster",
                 "de blad som omsluta blomman", "det gamla myntväsendet", "skrifttecken i runalfabetet"]


def name(rng, lo=2, hi=3):
    s = "".join(rng.choice(SYL) for _ in range(rng.randint(lo, hi)))
    return s[0].upper() + s[1:]


COUNTRIES = ["Norge", "Danmark", "Finland", "Tyskland", "Frankrike", "Ryssland", "Italien", "Spanien",
             "Egypten", "Indien", "Kina", "Förenta staterna", "Brasilien", "England", "Österrike"]


def place_text(rng, hw):
    kind = rng.choice(["socken", "stad", "köping", "by", "herrgård"])
    return (
        f"{hw}, {kind} i {rng.choice(REGIONS)} län, {name(rng)} härad, vid {rng.choice(WATERS)}. "
        f"Areal {rng.randint(1, 30)},{rng.randint(100, 999)} har. {rng.randint(1, 9)},{rng.randint(100, 999)} "
        f"innev. ({rng.randint(1870, 1890)})."
    )


def foreign_place_text(rng, hw):
    kind = rng.choice(["stad", "hufvudstad", "hamnstad", "provins", "guvernement", "ö", "residensstad"])
    return (
        f"{hw}, {kind} i {rng.choice(COUNTRIES)}, vid {name(rng)}floden, nära {name(rng)}. "
        f"{rng.randint(2, 900)},{rng.randint(100, 999)} innev. ({rng.randint(1870, 1912)}). "
        f"{rng.choice(['Betydande handel', 'Lifliga sjöfart', 'Universitet och domkyrka', 'Fästning'])}."
    )


def person_text(rng, hw):
    born = rng.randint(1600, 1850)
    return (
        f"{hw}, {name(rng)} {name(rng)}, {rng.choice(NATIONS)} {rng.choice(PROFESSIONS)}, f. {born} i {name(rng)}, "
        f"d. {born + rng.randint(30, 80)}. Utgaf {rng.randint(2, 9)} band."
    )


def concept_text(rng, hw):
    return f"{hw}, {rng.choice(CONCEPT_HEADS)} {rng.choice(CONCEPT_TAILS)}."


def light_revision(text):
    return text.replace("innev.", "inv.").replace("hufvud", "huvud").replace("af ", "av ")


def write_matching():
    rng = random.Random(2024)
    base = os.path.join(ROOT, "matching")
    makers = [place_text, person_text, concept_text]
    e1, e2, gold = [], [], []
    used = set()

    def fresh(prefix=""):
        while True:
            hw = prefix + name(rng).lower() if prefix else name(rng)
            if hw not in used:
                used.add(hw)
                return hw

    plan = ["carry"] * 28 + ["reform"] * 5 + ["rewrite"] * 3 + ["removed"] * 4
    rng.shuffle(plan)
    added_at = sorted(rng.sample(range(40), 4))
    for i, kind in enumerate(plan):
        if kind == "reform":
            hw1 = fresh("Qv")
            hw2 = "Kv" + hw1[2:]
        else:
            hw1 = hw2 = fresh()
        make = makers[i % 3] if kind != "reform" else place_text
        t1 = make(rng, hw1)
        id1 = f"1:m:0001:{i}"
        e1.append({"id": id1, "edition": "first", "volume": "m", "page": "0001", "headword": hw1,
                   "text": t1, "strategy": "bold"})
        if kind == "removed":
            gold.append({"e1_id": id1, "e2_id": None})
            continue
        if kind == "carry":
            t2 = light_revision(t1)
        elif kind == "reform":
            t2 = t1.replace(hw1, hw2, 1)
        else:
            t2 = make(rng, hw2)
        id2 = f"2:m:0001:{len(e2)}"
        e2.append({"id": id2, "edition": "second", "volume": "m", "page": "0001", "headword": hw2,
                   "text": t2, "strategy": "bold"})
        gold.append({"e1_id": id1, "e2_id": id2})
        if i in added_at:
            hw = fresh()
            e2.append({"id": f"2:m:0001:{len(e2)}", "edition": "second", "volume": "m", "page": "0001",
                       "headword": hw, "text": makers[i % 3](rng, hw), "strategy": "bold"})
    assert len(e1) == 40 and len(e2) == 40

    v1 = [(e["id"], mock_embed(e["text"][:TRUNC])) for e in e1]
    v2 = [(e["id"], mock_embed(e["text"][:TRUNC])) for e in e2]
    pairs, removed, added = greedy_match(v1, v2, 0.9, 10)
    base_pairs, base_removed, base_added = baseline_match(
        [(e["id"], e["headword"]) for e in e1], [(e["id"], e["headword"]) for e in e2]
    )
    g = {r["e1_id"]: r["e2_id"] for r in gold}
    emb = match_f1(pairs, g)
    bl = match_f1(base_pairs, g)
    assert emb[2] > bl[2], (emb, bl)

    dump_jsonl(os.path.join(base, "first.jsonl"), [entry_json(e) for e in e1])
    dump_jsonl(os.path.join(base, "second.jsonl"), [entry_json(e) for e in e2])
    dump_jsonl(os.path.join(base, "gold.jsonl"), gold)
    expected = {
        "threshold": 0.9,
        "k": 10,
        "embedding": {"pairs": [[a, b] for a, b, _ in pairs], "removed": removed, "added": added,
                      "precision": emb[0], "recall": emb[1], "f1": emb[2]},
        "baseline": {"pairs": [[a, b] for a, b, _ in base_pairs], "removed": base_removed,
                     "added": base_added, "precision": bl[0], "recall": bl[1], "f1": bl[2]},
    }
    write_text(os.path.join(base, "expected.json"), json.dumps(expected, indent=2, ensure_ascii=False) + "\n")
    return emb, bl


# ---------------------------------------------------------------- crossrefs


def write_crossref():
    rng = random.Random(7)
    base = os.path.join(ROOT, "crossref")
    # (headword, text, is a cross-reference)
    fixed = [
        ("Bajasid", "Bajasid, stad. Se Bajaset.", True),
        ("Bajasid", "Bajasid, turkiska sultaner. 1. Bajasid I, med tillnamnet Jildirim, f. 1347, sultan 1389, "
                    "slog ungrarna vid Nikopolis 1396.", False),
        ("Bajesid", "Bajesid, turkiska sultaner. Se Bajasid.", True),
        ("Bajaset", "Bajaset, stad i turkiska Armenien, nära persiska gränsen. 5,000 innev.", False),
        ("Nervsjukdomar", "Nervsjukdomar, sjukdomar i nervsystemet, delas i organiska och funktionella. "
                          "Se vidare de särskilda artiklarna.", False),
        ("Nervtumör", "Nervtumör. Se Nervsjukdomar.", True),
        ("Abo", "Abo. Se Åbo.", True),
        ("Åbo", "Åbo, stad i Finland, vid Aura å. 24,000 innev.", False),
        ("Qvenneberga", "Qvenneberga. Se Kvenneberga.", True),
        ("Kvenneberga", "Kvenneberga, socken i Jönköpings län, Vestra härad. 820 innev.", False),
        ("Tellus", "Tellus. Se Jorden.", True),
    ]
    makers = [place_text, person_text, concept_text]
    rows = []
    used = {f[0] for f in fixed}
    labels = []
    insert_at = sorted(rng.sample(range(100), len(fixed)))
    fi = 0
    for i in range(100):
        if fi < len(fixed) and i == insert_at[fi]:
            hw, text, label = fixed[fi]
            fi += 1
        else:
            while True:
                hw = name(rng)
                if hw not in used:
                    used.add(hw)
                    break
            text = makers[i % 3](rng, hw)
            label = False
        labels.append(label)
        rows.append({"id": f"1:c:{1 + i // 25:04}:{i % 25}", "edition": "first", "volume": "c",
                     "page": f"{1 + i // 25:04}", "headword": hw, "text": text, "strategy": "bold"})
    # The first-match error only shows if the city crossref precedes the
    # sultans' entry.
    pos = {r["text"]: n for n, r in enumerate(rows)}
    assert pos[fixed[0][1]] < pos[fixed[1][1]]
    dump_jsonl(os.path.join(base, "entries.jsonl"), [entry_json(r) for r in rows])

    first = {}
    for r in rows:
        first.setdefault(r["headword"], r["id"])
    expected = []
    for r in rows:
        t = r["text"]
        if is_crossref_text(t):
            word = t.split(" Se ", 1)[1].rstrip(".")
            expected.append({"source_id": r["id"], "target_word": word, "resolved_id": first.get(word)})
    dump_jsonl(os.path.join(base, "expected.jsonl"), expected)
    dump_jsonl(
        os.path.join(base, "gold.jsonl"),
        [{"entry_id": r["id"], "label": lab} for r, lab in zip(rows, labels)],
    )


# ---------------------------------------------------------------- classifiers


def continuation_text(rng):
    starts = ["Staden har", "Kyrkan är", "Han blef", "Socknen har", "Godset tillhörde", "Under kriget var",
              "Efter branden", "Här finnas", "Den förste", "Sedan 1850 är", "Hans skrifter", "Trakten är"]
    return (
        f"{rng.choice(starts)} {rng.choice(['betydande', 'flera', 'ett gammalt', 'sedan länge'])} "
        f"{rng.choice(['sågverk', 'bruk', 'gårdar', 'fästningsverk', 'kapell', 'minnesmärken'])} och "
        f"{rng.choice(['uppfördes', 'ombyggdes', 'utvidgades', 'förstördes'])} {rng.randint(1200, 1890)}."
    )


def write_classifiers():
    base = os.path.join(ROOT, "classifiers")
    rng = random.Random(11)

    def entry_rows(n):
        rows = []
        for i in range(n):
            if i % 2 == 0:
                rows.append({"text": [place_text, person_text, concept_text][i % 3](rng, name(rng)), "label": True})
            else:
                rows.append({"text": continuation_text(rng), "label": False})
        return rows

    dump_jsonl(os.path.join(base, "entry_train.jsonl"), entry_rows(400))
    dump_jsonl(os.path.join(base, "entry_test.jsonl"), entry_rows(200))

    def location_rows(n):
        rows = []
        for i in range(n):
            if i % 2 == 0:
                maker = place_text if i % 4 == 0 else foreign_place_text
                rows.append({"text": maker(rng, name(rng)), "label": True})
            else:
                maker = person_text if i % 4 == 1 else concept_text
                rows.append({"text": maker(rng, name(rng)), "label": False})
        return rows

    train = location_rows(400)
    dump_jsonl(os.path.join(base, "location_train.jsonl"), train)
    dump_jsonl(os.path.join(base, "location_test.jsonl"), location_rows(200))
    return train


# ---------------------------------------------------------------- geostats

# Hand-placed points: (name, lat, lon, expected country code or None).
GEO_POINTS = [
    ("Västerås", 59.61, 16.55, "SE"), ("Uppsala", 59.86, 17.64, "SE"), ("Jönköping", 57.78, 14.16, "SE"),
    ("Östersund", 63.18, 14.64, "SE"), ("Kiruna", 67.86, 20.23, "SE"), ("Örebro", 59.27, 15.21, "SE"),
    ("Falun", 60.61, 15.63, "SE"), ("Växjö", 56.88, 14.81, "SE"),
    ("Oslo", 59.91, 10.75, "NO"), ("Lillehammer", 61.12, 10.47, "NO"), ("Røros", 62.57, 11.38, "NO"),
    ("Tampere", 61.50, 23.76, "FI"), ("Kuopio", 62.89, 27.68, "FI"),
    ("Berlin", 52.52, 13.40, "DE"), ("München", 48.14, 11.58, "DE"), ("Kassel", 51.31, 9.48, "DE"),
    ("Paris", 48.86, 2.35, "FR"), ("Lyon", 45.76, 4.84, "FR"), ("Madrid", 40.42, -3.70, "ES"),
    ("Wien", 48.21, 16.37, "AT"), ("Warszawa", 52.23, 21.01, "PL"), ("Moskva", 55.76, 37.62, "RU"),
    ("Rom", 41.90, 12.50, "IT"), ("Prag", 50.08, 14.44, "CZ"), ("Budapest", 47.50, 19.04, "HU"),
    ("Birmingham", 52.49, -1.89, "GB"),
    ("Peking", 39.90, 116.40, "CN"), ("Delhi", 28.61, 77.21, "IN"), ("Teheran", 35.69, 51.39, "IR"),
    ("Kabul", 34.56, 69.21, "AF"), ("Ulan Bator", 47.89, 106.91, "MN"), ("Bagdad", 33.31, 44.36, "IQ"),
    ("Kairo", 30.04, 31.24, "EG"), ("Nairobi", -1.29, 36.82, "KE"), ("Khartum", 15.50, 32.56, "SD"),
    ("Addis Abeba", 9.03, 38.74, "ET"), ("Johannesburg", -26.20, 28.05, "ZA"),
    ("Denver", 39.74, -104.99, "US"), ("Chicago", 41.88, -87.63, "US"), ("Mexico", 19.43, -99.13, "MX"),
    ("Winnipeg", 49.90, -97.14, "CA"),
    ("Brasília", -15.79, -47.88, "BR"), ("La Paz", -16.50, -68.15, "BO"), ("Bogotá", 4.71, -74.07, "CO"),
    ("Santiago", -33.45, -70.67, "CL"),
    ("Alice Springs", -23.70, 133.88, "AU"), ("Canberra", -35.28, 149.13, "AU"),
    ("Nordatlanten", 45.0, -35.0, None), ("Indiska oceanen", -20.0, 80.0, None),
    ("Stilla havet", 0.0, -140.0, None),
]

# Edition country mixes shaped like the published change: large European
# countries lose ground, North America, Norway and northern Sweden gain.
TREND = {
    "first": {"SE": 14, "DE": 6, "FR": 6, "GB": 5, "IT": 4, "RU": 4, "NO": 3, "US": 1, "CA": 1, "FI": 2},
    "second": {"SE": 14, "DE": 3, "FR": 3, "GB": 3, "IT": 2, "RU": 3, "NO": 7, "US": 6, "CA": 3, "FI": 2},
}


def write_geostats():
    from shapely.geometry import Point, shape
    from shapely.prepared import prep

    base = os.path.join(ROOT, "geostats")
    with open(os.path.join(ROOT, "..", "crates", "core", "data", "countries_110m.geojson"), encoding="utf-8") as f:
        gj = json.load(f)
    shapes = {}
    continent = {}
    for feat in gj["features"]:
        code = feat["properties"]["iso_a2"]
        g = shape(feat["geometry"])
        shapes[code] = shapes[code].union(g) if code in shapes else g
        continent[code] = feat["properties"]["continent"]
    prepared = {c: prep(g) for c, g in shapes.items()}

    def country_at(lat, lon):
        p = Point(lon, lat)
        hits = [c for c, g in prepared.items() if g.contains(p)]
        assert len(hits) <= 1, hits
        return hits[0] if hits else None

    links = []
    for i, (nm, lat, lon, cc) in enumerate(GEO_POINTS):
        got = country_at(lat, lon)
        assert got == cc, (nm, got, cc)
        if cc is not None:
            # Well inside, so edge handling cannot flip it.
            assert shapes[cc].boundary.distance(Point(lon, lat)) > 0.2, nm
        links.append({"entry_id": f"1:g:0001:{i}", "qid": f"Q95{i:05}", "lat": lat, "lon": lon,
                      "similarity": 0.9, "source": "Wikipedia"})
    assert len(links) == 50
    dump_jsonl(os.path.join(base, "links.jsonl"), links)
    tally = {}
    for _nm, _lat, _lon, cc in GEO_POINTS:
        if cc is not None:
            tally[continent[cc]] = tally.get(continent[cc], 0) + 1
    write_text(os.path.join(base, "shapely_tally.json"), json.dumps(tally, indent=2, sort_keys=True) + "\n")

    rng = random.Random(5)
    for ed, mix in TREND.items():
        rows = []
        for cc in sorted(mix):
            g = shapes[cc]
            inner = g.buffer(-0.5)
            minx, miny, maxx, maxy = inner.bounds
            if cc == "SE" and ed == "second":
                miny = 64.0
            if cc == "RU":
                maxx = 60.0
            if cc in ("US", "CA"):
                minx, maxx = max(minx, -125.0), min(maxx, -70.0)
                if cc == "CA":
                    maxy = min(maxy, 60.0)
            n = 0
            while n < mix[cc]:
                lon = round(rng.uniform(minx, maxx), 4)
                lat = round(rng.uniform(miny, maxy), 4)
                if inner.contains(Point(lon, lat)) and country_at(lat, lon) == cc:
                    rows.append({"entry_id": f"{ED_NUM[ed]}:g:0001:{len(rows)}", "qid": f"Q96{len(rows):05}",
                                 "lat": lat, "lon": lon, "similarity": 0.9, "source": "Wikipedia"})
                    n += 1
        dump_jsonl(os.path.join(base, f"trend_{ed}.jsonl"), rows)


# ---------------------------------------------------------------- config


def write_config(location_train):
    dump_jsonl(os.path.join(ROOT, "location_labels.jsonl"), location_train)
    letters = "\n".join(f'"{k}" = "{v}"' for k, v in sorted(VOLUME_LETTERS.items()))
    write_text(
        os.path.join(ROOT, "pipeline.toml"),
        f"""# Fixture run: mock embeddings, replayed API responses.
seed = 0

[corpus]
pages = "corpus"

[segment]
index_threshold = 0.15
truncation = 200

[segment.volume_letters]
{letters}

[embedder]
kind = "mock"
dim = 256

[location]
labels = "location_labels.jsonl"

[match]
threshold = 0.9
k = 10

[link]
threshold = 0.6
k = 5
radius_km = 25.0
api_mode = "replay"
fixtures = "wiki"
""",
    )


def write_embedder_vectors(entries):
    texts = [e["text"][:TRUNC] for e in entries[::4]] + [
        "Å",
        "Qvenneberga",
        "  Öved  ",
        "ÅÄÖ åäö ÆØ æø ü é",
        "1,798 innev. (1892)",
        "a-b_c.d",
    ]
    rows = []
    for dim, seed in ((256, 0), (64, 7)):
        for t in texts:
            rows.append({"text": t, "dim": dim, "seed": seed, "vector": mock_embed(t, dim, seed)})
    dump_jsonl(os.path.join(ROOT, "embedder", "mock_vectors.jsonl"), rows)


def main():
    entries, counts = expected_entries()
    write_corpus(entries, counts)
    write_embedder_vectors(entries)
    kg, searched = write_wiki(entries)
    report = write_linking(entries, kg, searched)
    emb, bl = write_matching()
    write_crossref()
    train = write_classifiers()
    write_geostats()
    write_config(train)
    print(f"entries: {len(entries)}")
    for ed in ("first", "second"):
        print(ed, {k: counts.get((ed, k), 0) for k in ("bold", "index", "classifier", "continuation", "orphan")})
    print(f"matching F1: embedding {emb[2]:.4f}, baseline {bl[2]:.4f}")


if __name__ == "__main__":
    main()
