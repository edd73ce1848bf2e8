import random

import pytest

from corpusforge.errors import EmptyContent, ParseFailure
from corpusforge.pipeline import (
    CleanOptions,
    FilterConfig,
    MinHashConfig,
    RawFile,
    VERDICT_EXACT,
    VERDICT_FUZZY,
    VERDICT_KEEP,
    clean_file,
    estimate_jaccard,
    exact_dedup,
    filter_file,
    fuzzy_dedup,
    infer_language,
    minhash_signature,
    run_pipeline,
    shingle_hashes,
    signature_from_hashes,
)

GOOD_BODY = ("int value_%02d = %d; /* steady line */\n" * 10)


def make_file(path="a.c", content=None):
    if content is None:
        content = "".join(
            f"int value_{i:02d} = {i * 3};\n" for i in range(10)
        )
    return RawFile(path=path, content=content)


class TestFilter:
    def test_typical_file_passes(self):
        f = make_file()
        assert filter_file(f, FilterConfig()).passed

    def test_long_line_rejected(self):
        f = make_file(content="x" * 5000 + "\n")
        v = filter_file(f, FilterConfig(max_line_len=1000))
        assert not v.passed and v.reason == "LineLength"

    def test_excluded_extension(self):
        f = make_file(path="a.xml", content=make_file().content)
        v = filter_file(f, FilterConfig(excluded_extensions=frozenset({"xml", "html"})))
        assert not v.passed and v.reason == "FileType"

    def test_avg_line_length(self):
        f = make_file(content=("y" * 200 + "\n") * 5)
        v = filter_file(f, FilterConfig(max_avg_line_len=100))
        assert not v.passed and v.reason == "AvgLineLength"

    def test_alnum_ratio(self):
        f = make_file(content="+-*/ %^&!\n()[]{} ;;\n<><> ++--\n" * 3)
        v = filter_file(f, FilterConfig())
        assert not v.passed and v.reason == "AlnumRatio"

    def test_total_chars(self):
        f = make_file(content="int xatremely;\n")
        v = filter_file(f, FilterConfig(min_total_chars=50))
        assert not v.passed and v.reason == "TotalChars"

    def test_first_failure_wins(self):
        # violates both AvgLineLength and FileType; AvgLineLength is earlier
        f = make_file(path="a.xml", content=("z" * 200 + "\n") * 3)
        v = filter_file(f, FilterConfig())
        assert v.reason == "AvgLineLength"

    def test_blank_lines_exempt_from_minimum(self):
        f = make_file(content="int first_line_here = 1;\n\nint second_value = 2;\n" * 2)
        assert filter_file(f, FilterConfig(min_line_len=1)).passed

    def test_deterministic(self):
        f = make_file()
        cfg = FilterConfig()
        assert filter_file(f, cfg) == filter_file(f, cfg)


class TestClean:
    def test_whitespace_rules(self):
        f = make_file(content="int x;  \n\n\n\n}")
        assert clean_file(f).content == "int x;\n\n}"

    def test_two_blank_lines_kept(self):
        # runs of one or two blank lines are below the collapse threshold
        f = make_file(content="a\n\n\nb")
        assert clean_file(f).content == "a\n\n\nb"

    def test_crlf_normalized(self):
        f = make_file(content="int a;\r\nint b;\r")
        assert clean_file(f).content == "int a;\nint b;\n"

    def test_no_comments_identity(self):
        content = "int x = 1;\nint y = 2;\n"
        f = make_file(content=content)
        out = clean_file(f, CleanOptions(strip_comments=True))
        assert out.content == clean_file(f).content

    def test_line_comment_stripped(self):
        f = make_file(content="x=1; // note\n")
        out = clean_file(f, CleanOptions(strip_comments=True))
        assert out.content == "x=1;\n"

    def test_block_comment_preserves_line_numbers(self):
        f = make_file(content="int a; /* c1\nc2 */ int b;\n")
        out = clean_file(f, CleanOptions(strip_comments=True))
        lines = out.content.split("\n")
        assert lines[0] == "int a;"
        assert "int b;" in lines[1]

    def test_unterminated_block_comment_fails(self):
        f = make_file(content="int a;\n/* never closed\nint b;\n")
        with pytest.raises(ParseFailure):
            clean_file(f, CleanOptions(strip_comments=True))

    def test_idempotent(self):
        rng = random.Random(3)
        pieces = ["int x;", "", "  ", "y();\t", "", "", "", "/*c*/ z;", "// end"]
        for _ in range(50):
            content = "\n".join(rng.choice(pieces) for _ in range(rng.randint(0, 12)))
            for opts in (CleanOptions(), CleanOptions(strip_comments=True)):
                once = clean_file(make_file(content=content), opts)
                twice = clean_file(once, opts)
                assert twice.content == once.content


class TestExactDedup:
    def test_identical_pair(self):
        files = [make_file("b.c"), make_file("a.c")]
        decisions = {d.path: d for d in exact_dedup(files)}
        assert decisions["a.c"].verdict == VERDICT_KEEP
        assert decisions["b.c"].verdict == VERDICT_EXACT
        assert decisions["b.c"].duplicate_of == "a.c"

    def test_all_distinct(self):
        files = [make_file("a.c"), make_file("b.c", content=make_file().content + "int q;\n")]
        assert all(d.verdict == VERDICT_KEEP for d in exact_dedup(files))

    def test_one_duplicate_among_three(self):
        base = make_file().content
        files = [make_file("a.c", base), make_file("b.c", base + "x"), make_file("c.c", base)]
        dups = [d for d in exact_dedup(files) if d.verdict == VERDICT_EXACT]
        assert len(dups) == 1 and dups[0].path == "c.c"

    def test_order_independent(self):
        base = make_file().content
        files = [make_file("a.c", base), make_file("b.c", base)]
        assert exact_dedup(files) == exact_dedup(list(reversed(files)))


def synthetic_hash_sets(rng, size, overlap):
    """Two sets of 64-bit values with |A| = |B| = size and |A & B| = overlap."""
    shared = {rng.getrandbits(64) for _ in range(overlap)}
    while len(shared) < overlap:
        shared.add(rng.getrandbits(64))
    def pad(dst):
        while len(dst) < size:
            dst.add(rng.getrandbits(64))
        return dst
    a = pad(set(shared))
    b = pad(set(shared))
    return a, b


class TestMinHash:
    def test_deterministic(self):
        content = make_file().content
        assert minhash_signature(content) == minhash_signature(content)

    def test_vectorized_matches_scalar_reference(self):
        from corpusforge.pipeline import _perm_salts, _xorshift64star

        rng = random.Random(0)
        hashes = {rng.getrandbits(64) for _ in range(200)}
        cfg = MinHashConfig(num_perms=32, seed=5)
        vec = signature_from_hashes(hashes, cfg)
        ref = [min(_xorshift64star(h ^ salt) for h in hashes) for salt in _perm_salts(cfg)]
        assert vec == ref

    def test_empty_content(self):
        with pytest.raises(EmptyContent):
            minhash_signature("int", MinHashConfig(shingle_k=5))

    def test_estimate_accuracy_at_half(self):
        # oracle: exact Jaccard of constructed sets = 0.5
        rng = random.Random(100)
        cfg = MinHashConfig(num_perms=256, seed=9)
        hits = 0
        trials = 300
        for _ in range(trials):
            a, b = synthetic_hash_sets(rng, 1000, 667)  # J = 667/1333 ~ 0.5004
            true_j = len(a & b) / len(a | b)
            est = estimate_jaccard(signature_from_hashes(a, cfg), signature_from_hashes(b, cfg))
            if abs(est - true_j) <= 0.10:
                hits += 1
        assert hits / trials >= 0.99

    def test_disjoint_contents(self):
        cfg = MinHashConfig(num_perms=256, seed=2)
        a = " ".join(f"alpha_{i}" for i in range(300))
        b = " ".join(f"omega_{i}" for i in range(300))
        assert len(shingle_hashes(a, 5) & shingle_hashes(b, 5)) == 0
        est = estimate_jaccard(minhash_signature(a, cfg), minhash_signature(b, cfg))
        assert est <= 0.05


def big_c_function(var="count"):
    lines = ["int accumulate_all(const int *values, int n) {",
             f"    int {var} = 0;",
             "    int total = 0;"]
    for i in range(28):
        lines.append(f"    total += values[{i}] * {i + 1};")
    lines += [f"    for (int i = 0; i < n; i++) {{",
              f"        {var} += 1;",
              "        total += values[i];",
              "    }",
              f"    return total + {var};",
              "}", ""]
    return "\n".join(lines)


class TestFuzzyDedup:
    def test_renamed_local_variable(self):
        original = big_c_function("count")
        renamed = big_c_function("tally")
        # independent oracle first: exact Jaccard over shingle sets
        a, b = shingle_hashes(original, 5), shingle_hashes(renamed, 5)
        true_j = len(a & b) / len(a | b)
        assert true_j > 0.85
        files = [RawFile("a.c", original), RawFile("b.c", renamed)]
        decisions = {d.path: d for d in fuzzy_dedup(files, threshold=0.85)}
        assert decisions["a.c"].verdict == VERDICT_KEEP
        assert decisions["b.c"].verdict == VERDICT_FUZZY
        assert decisions["b.c"].duplicate_of == "a.c"
        assert decisions["b.c"].similarity >= 0.85

    def test_unrelated_files_kept(self):
        files = [RawFile("a.c", big_c_function()),
                 RawFile("b.c", " ".join(f"zz_{i}();" for i in range(200)))]
        assert all(d.verdict == VERDICT_KEEP for d in fuzzy_dedup(files))

    def test_threshold_one_requires_identical_shingles(self):
        original = big_c_function()
        reformatted = original.replace("    ", "\t")  # same token stream
        tweaked = original.replace("total + ", "total - ")
        files = [RawFile("a.c", original), RawFile("b.c", reformatted),
                 RawFile("c.c", tweaked)]
        decisions = {d.path: d for d in fuzzy_dedup(files, threshold=1.0)}
        assert decisions["b.c"].verdict == VERDICT_FUZZY
        assert decisions["c.c"].verdict == VERDICT_KEEP

    def test_tiny_files_kept(self):
        files = [RawFile("a.c", "int"), RawFile("b.c", "int")]
        assert all(d.verdict == VERDICT_KEEP for d in fuzzy_dedup(files))


class TestPipelineEndToEnd:
    def test_fixture_repo_counts(self, pipeline_result):
        stats = pipeline_result.stats
        assert stats["rejected"]["FileType"] == 2
        assert stats["rejected"]["LineLength"] == 1
        assert stats["rejected"]["TotalChars"] == 1
        assert stats["exact_duplicates"] == 1
        assert stats["fuzzy_duplicates"] == 1
        assert stats["kept"] >= 50

    def test_order_invariance(self, mini_repo):
        from corpusforge.pipeline import load_inputs

        files = load_inputs(mini_repo)
        a = run_pipeline(files)
        b = run_pipeline(list(reversed(files)))
        assert [f.path for f in a.kept] == [f.path for f in b.kept]
        assert a.decisions == b.decisions

    def test_language_inference(self):
        assert infer_language("x/y.c") == "C"
        assert infer_language("x/y.hpp") == "CPP"
        assert infer_language("x/y.txt") == "Other"
        assert infer_language("Makefile") == "Other"
