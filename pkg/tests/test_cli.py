import io

from gapfill import cli, fixtures


def run(capsys, *argv):
    status = cli.dispatch(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


class TestStatusCodes:
    def test_no_args_usage(self, capsys):
        assert run(capsys, )[0] == 2

    def test_unknown_subcommand_usage(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_extract_missing_args_usage(self, capsys):
        assert run(capsys, "extract")[0] == 2

    def test_missing_file_is_io_error(self, capsys):
        status, _out, err = run(capsys, "gloss", "compile", "/nonexistent/x.gloss")
        assert status == 3 and "cannot read" in err

    def test_bad_format_is_format_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.gloss"
        bad.write_text("(GLOSS ((OP1 ")
        status, _out, _err = run(capsys, "gloss", "compile", str(bad))
        assert status == 4

    def test_domain_error_status(self, tmp_path, capsys):
        multi = tmp_path / "multi.gloss"
        multi.write_text('(GLOSS ((OP1 "a")))\n(GLOSS ((OP1 "b")))\n')
        status, _out, _err = run(capsys, "gloss", "compile", str(multi))
        assert status == 5


class TestPipelines:
    def test_gloss_lm_extract_round_trip(self, tmp_path, capsys):
        lat_path = tmp_path / "s8.lat"
        status, out, err = run(capsys, "gloss", "compile",
                               str(fixtures.path("s8.gloss")), "-o", str(lat_path))
        assert status == 0, err
        model_path = tmp_path / "s8.lm"
        status, _out, err = run(capsys, "lm", "train",
                                str(fixtures.path("s8_corpus.txt")),
                                "--order", "2", "-o", str(model_path))
        assert status == 0, err
        status, out, _err = run(capsys, "extract", str(lat_path),
                                "--model", str(model_path), "--n", "1")
        assert status == 0
        assert out.splitlines()[0].split("\t")[1] == \
            "the new company plans to establish in February ."

    def test_extract_on_bundled_fixture(self, capsys):
        status, out, _err = run(capsys, "extract", str(fixtures.path("s8.lat")),
                                "--model", str(fixtures.path("s8.lm")), "--n", "1")
        assert status == 0
        assert out.splitlines()[0].split("\t")[1] == \
            "the new company plans to establish in February ."

    def test_prefsem_score(self, capsys):
        status, out, _err = run(capsys, "prefsem", "score",
                                str(fixtures.path("goal.il")),
                                "--ontology", str(fixtures.path("ontology.ont")))
        assert status == 0
        assert out.splitlines()[0].endswith("h-709")
        assert "<CALENDAR-MONTH, MONTH-INDEX, 2>" in out

    def test_translit_train_and_decode(self, tmp_path, capsys):
        table_path = tmp_path / "t.tsv"
        status, _out, err = run(capsys, "translit", "train",
                                str(fixtures.path("translit_pairs.tsv")),
                                "-o", str(table_path))
        assert status == 0, err
        assert table_path.read_text() == fixtures.path("translit_table.tsv").read_text()
        status, out, _err = run(capsys, "translit", "decode", "kurinton",
                                "--table", str(table_path),
                                "--lm", str(fixtures.path("letters.lm")), "--n", "1")
        assert status == 0
        assert out.splitlines()[0].split("\t")[1] == "clinton"

    def test_skipparse_command(self, capsys):
        status, out, _err = run(capsys, "skipparse", "the", "dog", "!", "barks",
                                "--grammar", str(fixtures.path("toy.cfg")),
                                "--suspicion", str(fixtures.path("suspicion.tsv")))
        assert status == 0
        assert "skipped:\t!" in out

    def test_skipparse_trains_suspicion_on_the_fly(self, capsys):
        status, out, _err = run(capsys, "skipparse", "a", "cat", "um", "sleeps",
                                "--grammar", str(fixtures.path("toy.cfg")),
                                "--parsed", str(fixtures.path("skip_parsed.txt")),
                                "--unparsed", str(fixtures.path("skip_unparsed.txt")))
        assert status == 0
        assert "skipped:\tum" in out

    def test_postedit_train_and_run(self, tmp_path, capsys, monkeypatch):
        tree_path = tmp_path / "tree.dt"
        status, _out, err = run(capsys, "postedit", "train",
                                str(fixtures.path("article_corpus.txt")),
                                "-o", str(tree_path))
        assert status == 0, err
        monkeypatch.setattr("sys.stdin", io.StringIO("dog barked\n"))
        status, out, _err = run(capsys, "postedit", "run", str(tree_path))
        assert status == 0
        assert out.strip().endswith("dog barked")

    def test_lm_score_deterministic(self, capsys, monkeypatch):
        for _ in range(2):
            monkeypatch.setattr("sys.stdin", io.StringIO("the new company plans\n"))
            status, out, _err = run(capsys, "lm", "score", str(fixtures.path("s8.lm")))
            assert status == 0
        # identical invocations print identical scores
        monkeypatch.setattr("sys.stdin", io.StringIO("the new company plans\n"))
        _s, out1, _e = run(capsys, "lm", "score", str(fixtures.path("s8.lm")))
        monkeypatch.setattr("sys.stdin", io.StringIO("the new company plans\n"))
        _s, out2, _e = run(capsys, "lm", "score", str(fixtures.path("s8.lm")))
        assert out1 == out2


class TestDemos:
    def test_demo_s8_lines(self, capsys):
        status, out, _err = run(capsys, "demo", "s8")
        assert status == 0
        lines = out.splitlines()
        assert '"The new companies will have as a purpose launching at February."' in lines
        assert '"The new company plans to establish in February."' in lines

    def test_demo_s3_lines(self, capsys):
        status, out, _err = run(capsys, "demo", "s3")
        assert status == 0
        lines = out.splitlines()
        assert '"...planned economy ages is threadbare..."' in lines
        assert '"...planned economy times are old..."' in lines

    def test_demo_translit_lines(self, capsys):
        status, out, _err = run(capsys, "demo", "translit")
        assert status == 0
        assert '"clinton"' in out and '"stepper motor"' in out

    def test_demos_are_bit_identical_across_runs(self, capsys):
        for name in ("s3", "s8", "translit"):
            _s, out1, _e = run(capsys, "demo", name)
            _s, out2, _e = run(capsys, "demo", name)
            assert out1 == out2

    def test_seed_env_override_changes_random_line_only(self, capsys, monkeypatch):
        monkeypatch.setenv("GAPFILL_SEED", "3")
        _s, seeded, _e = run(capsys, "demo", "s8")
        assert '"The new company plans to establish in February."' in seeded
        monkeypatch.delenv("GAPFILL_SEED")


class TestFixtureConstruction:
    def test_derived_artifacts_match_rebuild(self):
        rebuilt = fixtures.rebuild()
        for name, text in rebuilt.items():
            assert fixtures.path(name).read_text() == text, name

    def test_bundled_models_supported_by_oracle(self):
        # The constructed corpora must make the bundled bigram models
        # prefer the showcase sentences over every other lattice path.
        from gapfill import extract as X
        for which, target in (("s8", "the new company plans to establish in February ."),
                              ("s3", "planned economy times are old")):
            lat = fixtures.demo_lattice(which)
            model = fixtures.demo_model(which)
            oracle = X.brute_force_nbest(lat, model, 1)
            assert oracle.ranked[0][0] == target
