from pathlib import Path

import pytest

from imgql import formula as F
from imgql.errors import ArityError, CycleError, NameResolutionError, ParseError, StaticError
from imgql.expand import Expander, expand, expand_formula
from imgql.parser import parse, parse_formula, tokenize
from imgql.syntax import Binary, DistExpr, LetDef, Ref, format_expr, format_session

CORPUS = Path(__file__).parent / "corpus"


def test_let_with_two_params():
    (let,) = parse("Let touch(a,b) = a & reach(a|b,b);").statements
    assert isinstance(let, LetDef)
    assert let.params == ("a", "b")
    assert isinstance(let.body, Binary) and let.body.op == "&"


def test_nested_distance_with_half_open_interval():
    (let,) = parse("Let flt(a) = MDDT(!(MDDT(!a,<1)),<1);").statements
    assert isinstance(let.body, DistExpr) and let.body.metric == "MDDT"
    core = _core("MDDT(!(MDDT(![p>0],<1)),<1)")
    assert isinstance(core, F.Dist)
    assert core.interval == F.Interval(0.0, 1.0, True, False)
    assert isinstance(core.operand.operand, F.Dist)


def test_empty_body_is_reported_at_semicolon():
    with pytest.raises(ParseError) as exc:
        parse("Let x = ;")
    assert (exc.value.line, exc.value.column) == (1, 9)
    assert "identifier" in exc.value.expected


def test_error_positions_span_lines():
    with pytest.raises(ParseError) as exc:
        parse("Let a = [v > 1];\nLet b = a &;\n")
    assert (exc.value.line, exc.value.column) == (2, 12)


@pytest.mark.parametrize(
    "text",
    ["Let a = [v >];", "Let a = [v > 1]", "Check 8 a;", "Let = [v>1];", "Let a = EDT([v>1], 2);", "Model med;"],
)
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


def test_two_models_rejected():
    with pytest.raises(ParseError):
        parse('Model "med:a=x.nii";\nModel "med:b=y.nii";')


def test_model_bindings():
    s = parse('Model "med:ADC=ADC-norm.nii,\n            ROI=ROI_T2-2-ADC.nii";')
    assert s.model.kind == "med"
    assert s.model.bindings == (("ADC", "ADC-norm.nii"), ("ROI", "ROI_T2-2-ADC.nii"))


def test_output_path_token():
    s = parse("Output GBM-seg.nii\nCheck \"8\" [border];")
    assert s.output.path == "GBM-seg.nii"
    assert s.checks[0].color == "8"


def test_comments_are_skipped():
    s = parse("// header\nLet a = [v > 1]; // trailing\n")
    assert [l.name for l in s.lets] == ["a"]


def test_signed_constants():
    e = parse_formula("[v > -1.5e-1]")
    assert e.constant == -0.15


def test_tokens_carry_positions():
    toks = tokenize("Let a =\n  [v>1];")
    bracket = [t for t in toks if t.text == "["][0]
    assert (bracket.line, bracket.column) == (2, 3)


def test_precedence():
    e = parse_formula("a | b & c S d")
    assert e.op == "|" and e.right.op == "&" and e.right.right.op == "S"
    e = parse_formula("!a S N b")
    assert e.op == "S" and e.left.op == "!" and e.right.op == "N"
    e = parse_formula("a S b S c")
    assert e.left.op == "S"


def _core(text, session=""):
    return expand_formula(parse_formula(text), parse(session))


def test_reach_desugars_to_paper_form():
    got = _core("[a>0] R [b>0]")
    a, b = F.atom("a", ">", 0), F.atom("b", ">", 0)
    assert got is F.Not(F.Surrounded(F.Not(b), F.Not(a)))
    assert _core("reach([a>0],[b>0])", "Let reach(a,b) = !(!b S !a);") is got


def test_grow_expands_to_core():
    got = _core("grow([a>0],[b>0])", "Let grow(a,b) = (a|b) S (!b);")
    a, b = F.atom("a", ">", 0), F.atom("b", ">", 0)
    assert got is F.Surrounded(F.or_(a, b), F.Not(b))


def test_derived_operators():
    a, b = F.atom("a", ">", 0), F.atom("b", ">", 0)
    assert _core("[a>0] | [b>0]") is F.Not(F.And(F.Not(a), F.Not(b)))
    assert _core("I [a>0]") is F.Not(F.Near(F.Not(a)))
    assert _core("[a>0] T [b>0]") is F.And(a, F.reach(F.or_(a, b), b))
    assert _core("FF") is F.And(F.Border(), F.Not(F.Border()))
    assert _core("TT") is F.Not(F.false_())


@pytest.mark.parametrize(
    "cmp, interval",
    [
        ("<", F.Interval(0, 2, True, False)),
        ("<=", F.Interval(0, 2, True, True)),
        ("=", F.Interval(2, 2, True, True)),
        (">=", F.Interval(2, float("inf"), True, False)),
        (">", F.Interval(2, float("inf"), False, False)),
    ],
)
def test_distance_comparators(cmp, interval):
    got = _core(f"EDT([a>0], {cmp} 2)")
    assert got.metric == F.EUCLIDEAN and got.interval == interval
    assert _core(f"MDDT([a>0], {cmp} 2)").metric == F.CHAMFER


def test_explicit_interval_syntax():
    got = _core("MDDT([a>0], (1, inf))")
    assert got.interval == F.Interval(1, float("inf"), False, False)
    assert _core("MDDT([a>0], [2, 3])").interval == F.Interval(2, 3, True, True)


def test_cycle_is_rejected_with_path():
    with pytest.raises(CycleError, match="f -> f"):
        parse_and_expand("Let f(a) = f(a);")
    with pytest.raises(CycleError, match="g -> h -> g"):
        parse_and_expand("Let g = h;\nLet h = g;")


def parse_and_expand(text):
    return Expander(parse(text)).expand_checks()


def test_undefined_and_arity_errors():
    with pytest.raises(NameResolutionError, match="nope") as exc:
        parse_and_expand('Check "1" nope;')
    assert exc.value.line == 1
    with pytest.raises(ArityError):
        parse_and_expand('Let f(a) = a;\nCheck "1" f([v>1], [v>2]);')
    with pytest.raises(ArityError):
        parse_and_expand('Let f(a) = a([v>1]);')
    with pytest.raises(StaticError):
        parse_and_expand("Let a = [v>1];\nLet a = [v>2];")
    with pytest.raises(NameResolutionError):
        parse_and_expand("Let a = b;\nLet b = [v>1];")
    with pytest.raises(NameResolutionError, match="unknown predicate"):
        parse_and_expand('Check "1" [edge];')


def test_parameters_shadow_globals():
    got = parse_and_expand('Let a = [v>1];\nLet f(a) = N a;\nCheck "1" f([v>2]);').checks[0][1]
    assert got is F.Near(F.atom("v", ">", 2))


def test_sizes():
    p, q = F.atom("p", ">", 0), F.atom("q", ">", 0)
    assert F.size(p) == 1
    assert F.size(F.Not(p)) == 2
    assert F.size(F.Surrounded(p, q)) == 3
    assert F.size(F.Dist(F.EUCLIDEAN, F.Interval(0, 1, True, False), p)) == 2


def test_expansion_is_idempotent_on_core():
    f = _core("[a>0] T ([b>0] | N [a<1])")
    assert _core(F.to_text(f)) is f


def test_print_parse_roundtrip_on_corpus():
    for path in sorted(CORPUS.glob("*.imgql")):
        s = parse(path.read_text())
        assert parse(format_session(s)) == s, path.name


def test_format_expr_parenthesises():
    e = parse_formula("!a S b | c")
    assert parse_formula(format_expr(e)) == e


@pytest.mark.parametrize("name", ["gbm", "rectum_t2", "adc"])
def test_corpus_sessions_expand(name):
    s = parse((CORPUS / f"{name}.imgql").read_text())
    ex = Expander(s)
    assert ex.expand_all_definitions()
    assert expand(s)


def test_shared_subformulas_stay_small():
    s = parse((CORPUS / "gbm.imgql").read_text())
    (_, oedema), (_, tumor) = expand(s)
    assert F.size(oedema) > 10_000
    assert len(F.subformulas(oedema)) < 200
