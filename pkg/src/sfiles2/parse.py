"""SFILES 2.0 parsing: tokens, graph reconstruction, round-trip checking.

The tokenizer is longest-match over a fixed alphabet; every token owns a
contiguous span of the input so diagnostics can point at the offending
characters.  The parser is a single pass with a frame stack for branch
brackets and converging groups, symmetric matching for recycle and
signal mark pairs, and a finalize step that assigns equipment numbers
and builds the graph through the model API.

Recovery is one error per train: after a hard error the parser skips to
the next ``n|`` separator and keeps collecting diagnostics, but returns
no graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .model import COLUMN_TAGS, MATERIAL, SIGNAL, FlowsheetGraph, NodeRef

_NAME_RE = re.compile(r"^([A-Za-z]+)(?:-(\d+)(?:/(\d+))?)?$")
_CTRL_RE = re.compile(r"^[A-Z]+$")
_DIGITS_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    code: str
    message: str
    start: int
    end: int


@dataclass
class ParseDiagnostics:
    entries: list[Diagnostic] = field(default_factory=list)

    def add(self, level, code, message, start, end):
        self.entries.append(Diagnostic(level, code, message, start, end))

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.entries if d.level == "error"]

    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.entries if d.level == "warning"]

    def ok(self) -> bool:
        return not self.errors()


def tokenize(text: str) -> list[Token]:
    """Lex the input; malformed stretches come back as kind="error" tokens
    whose text is the diagnostic code."""
    out: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "(":
            j = text.find(")", i)
            if j < 0:
                out.append(Token("error", "unterminated-node", i, n))
                break
            out.append(Token("node", text[i + 1 : j], i, j + 1))
            i = j + 1
        elif c == "{":
            j = text.find("}", i)
            if j < 0:
                out.append(Token("error", "unterminated-brace", i, n))
                break
            out.append(Token("brace", text[i + 1 : j], i, j + 1))
            i = j + 1
        elif c == "[":
            out.append(Token("branch_open", c, i, i + 1))
            i += 1
        elif c == "]":
            out.append(Token("branch_close", c, i, i + 1))
            i += 1
        elif text.startswith("<&|", i):
            out.append(Token("conv_open", "<&|", i, i + 3))
            i += 3
        elif text.startswith("<%", i):
            m = _DIGITS_RE.match(text, i + 2)
            if m is None or len(m.group()) < 2:
                out.append(Token("error", "bad-recycle-digits", i, min(i + 4, n)))
                i = m.end() if m else i + 2
            else:
                out.append(Token("recycle_in", text[i + 2 : i + 4], i, i + 4))
                i += 4
        elif text.startswith("<_", i):
            m = _DIGITS_RE.match(text, i + 2)
            if m is None:
                out.append(Token("error", "bad-signal-digits", i, i + 2))
                i += 2
            else:
                out.append(Token("signal_in", m.group(), i, m.end()))
                i = m.end()
        elif c == "<":
            nxt = text[i + 1] if i + 1 < n else ""
            if nxt == "(":
                out.append(Token("legacy_back", "<", i, i + 1))
                i += 1
            elif nxt.isdigit() and nxt != "0":
                out.append(Token("recycle_in", nxt, i, i + 2))
                i += 2
            else:
                out.append(Token("error", "illegal-character", i, i + 1))
                i += 1
        elif c == "%":
            m = _DIGITS_RE.match(text, i + 1)
            if m is None or len(m.group()) < 2:
                out.append(Token("error", "bad-recycle-digits", i, min(i + 3, n)))
                i = m.end() if m else i + 1
            else:
                out.append(Token("recycle_out", text[i + 1 : i + 3], i, i + 3))
                i += 3
        elif c.isdigit() and c != "0":
            out.append(Token("recycle_out", c, i, i + 1))
            i += 1
        elif c == "_":
            m = _DIGITS_RE.match(text, i + 1)
            if m is None:
                out.append(Token("error", "bad-signal-digits", i, i + 1))
                i += 1
            else:
                out.append(Token("signal_out", m.group(), i, m.end()))
                i = m.end()
        elif text.startswith("n|", i):
            out.append(Token("train_sep", "n|", i, i + 2))
            i += 2
        elif c == "&":
            out.append(Token("conv_connector", c, i, i + 1))
            i += 1
        elif c == "|":
            out.append(Token("conv_close", c, i, i + 1))
            i += 1
        else:
            out.append(Token("error", "illegal-character", i, i + 1))
            i += 1
    return out


_ERROR_MESSAGES = {
    "unterminated-node": "node is missing its closing parenthesis",
    "unterminated-brace": "brace is missing its closing bracket",
    "bad-recycle-digits": "a recycle mark with % needs exactly two digits",
    "bad-signal-digits": "a signal mark needs at least one digit",
    "illegal-character": "character has no meaning here",
}


@dataclass
class _Occ:
    idx: int
    raw: str
    category: str
    number: int | None
    sub: int | None
    start: int
    end: int
    ctrl: str | None = None
    group: str | None = None


@dataclass
class _PEdge:
    src: int
    dst: int
    kind: str
    tag: str | None
    start: int
    end: int


@dataclass
class _Frame:
    kind: str  # "branch", "conv", "legacy"
    owner: int | None  # occurrence index the frame returns to
    start: int
    seen_connector: bool = False
    chain_target: int | None = None  # legacy frames: node the next <(x) feeds
    await_node: bool = False


class _Machine:
    def __init__(self, strict: bool, diags: ParseDiagnostics):
        self.strict = strict
        self.diags = diags
        self.occs: list[_Occ] = []
        self.edges: list[_PEdge] = []
        self.frames: list[_Frame] = []
        self.current: int | None = None
        # pending column tag waiting for its edge: (tag, start, end)
        self.pending: tuple[str, int, int] | None = None
        self.attach: int | None = None  # occurrence open for node braces
        self.rec_open: dict[int, tuple[str, int, str | None, int, int]] = {}
        self.sig_open: dict[int, tuple[str, int, int, int]] = {}
        self.failed = False

    def error(self, code, message, start, end):
        self.diags.add("error", code, message, start, end)
        self.failed = True

    def warn(self, code, message, start, end):
        self.diags.add("warning", code, message, start, end)

    def reset_train(self):
        self.frames.clear()
        self.current = None
        self.pending = None
        self.attach = None

    # -- token handlers; each returns False to trigger skip-to-next-train

    def on_node(self, tok: Token) -> bool:
        if not tok.text:
            self.error("empty-node", "node has no name", tok.start, tok.end)
            return False
        m = _NAME_RE.match(tok.text)
        if m is None:
            self.error("bad-node-name", f"not a unit name: {tok.text!r}", tok.start, tok.end)
            return False
        occ = _Occ(
            idx=len(self.occs),
            raw=tok.text,
            category=m.group(1),
            number=int(m.group(2)) if m.group(2) else None,
            sub=int(m.group(3)) if m.group(3) else None,
            start=tok.start,
            end=tok.end,
        )
        self.occs.append(occ)
        frame = self.frames[-1] if self.frames else None
        if frame is not None and frame.kind == "legacy":
            if not frame.await_node:
                self.error(
                    "malformed-legacy",
                    "nodes in a legacy converging branch must follow a < mark",
                    tok.start,
                    tok.end,
                )
                return False
            frame.await_node = False
            if self.pending is not None:
                tag, s, e = self.pending
                self.error("dangling-tag", f"tag {tag!r} cannot mark a legacy branch", s, e)
                return False
            self.edges.append(
                _PEdge(occ.idx, frame.chain_target, MATERIAL, None, tok.start, tok.end)
            )
            frame.chain_target = occ.idx
        elif self.current is not None:
            tag = None
            if self.pending is not None:
                tag, _s, _e = self.pending
                self.pending = None
            self.edges.append(_PEdge(self.current, occ.idx, MATERIAL, tag, tok.start, tok.end))
        elif self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
            return False
        self.current = occ.idx
        self.attach = occ.idx
        return True

    def on_brace(self, tok: Token) -> bool:
        text = tok.text
        if text in COLUMN_TAGS:
            if self.pending is not None:
                tag, s, e = self.pending
                self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
                return False
            self.pending = (text, tok.start, tok.end)
            return True
        target = self.occs[self.attach] if self.attach is not None else None
        if target is not None and text.isdigit() and target.category == "hex":
            target.group = text
            return True
        if target is not None and _CTRL_RE.match(text) and target.category == "C":
            if target.ctrl is not None:
                self.error(
                    "unknown-brace",
                    f"control node already carries code {target.ctrl!r}",
                    tok.start,
                    tok.end,
                )
                return False
            target.ctrl = text
            return True
        if self.strict:
            self.error("unknown-brace", f"brace {text!r} is not recognized", tok.start, tok.end)
            return False
        self.warn("unknown-brace", f"ignoring brace {text!r}", tok.start, tok.end)
        return True

    def on_branch_open(self, tok: Token, legacy_next: bool) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} must follow the opening bracket", s, e)
            return False
        if self.current is None:
            self.error(
                "branch-without-node", "branch has no node to fork from", tok.start, tok.end
            )
            return False
        kind = "legacy" if legacy_next else "branch"
        self.frames.append(
            _Frame(kind, owner=self.current, start=tok.start, chain_target=self.current)
        )
        return True

    def on_branch_close(self, tok: Token) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
            return False
        if not self.frames or self.frames[-1].kind not in ("branch", "legacy"):
            self.error(
                "unmatched-bracket-close", "no open branch to close", tok.start, tok.end
            )
            return False
        frame = self.frames.pop()
        if frame.kind == "legacy" and frame.await_node:
            self.error(
                "malformed-legacy", "legacy branch ends after a < mark", tok.start, tok.end
            )
            return False
        self.current = frame.owner
        return True

    def on_conv_open(self, tok: Token) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
            return False
        if self.current is None:
            self.error(
                "branch-without-node",
                "converging branch has no node to merge into",
                tok.start,
                tok.end,
            )
            return False
        self.frames.append(_Frame("conv", owner=self.current, start=tok.start))
        self.current = None
        return True

    def on_connector(self, tok: Token) -> bool:
        self.attach = None
        conv = None
        for frame in reversed(self.frames):
            if frame.kind == "conv":
                conv = frame
                break
            if frame.kind == "legacy":
                break
        if conv is None:
            self.error(
                "stray-connector", "& is only valid inside <&|...|", tok.start, tok.end
            )
            return False
        if conv.seen_connector:
            self.error(
                "multiple-connector",
                "converging branch already has its & connection",
                tok.start,
                tok.end,
            )
            return False
        if self.current is None:
            self.error("mark-without-node", "& has no node to connect", tok.start, tok.end)
            return False
        tag = None
        if self.pending is not None:
            tag, _s, _e = self.pending
            self.pending = None
        conv.seen_connector = True
        self.edges.append(_PEdge(self.current, conv.owner, MATERIAL, tag, tok.start, tok.end))
        return True

    def on_conv_close(self, tok: Token) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
            return False
        if not self.frames:
            self.error(
                "unmatched-conv-close", "no open converging branch to close", tok.start, tok.end
            )
            return False
        frame = self.frames[-1]
        if frame.kind != "conv":
            self.error(
                "unclosed-branch",
                "branch bracket is still open inside the converging branch",
                frame.start,
                frame.start + 1,
            )
            return False
        self.frames.pop()
        if not frame.seen_connector:
            self.error(
                "missing-connector",
                "converging branch closed without its & connection",
                tok.start,
                tok.end,
            )
            return False
        self.current = frame.owner
        return True

    def on_recycle_in(self, tok: Token) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} cannot mark a recycle target", s, e)
            return False
        if self.current is None:
            self.error("mark-without-node", "recycle mark has no node", tok.start, tok.end)
            return False
        rid = int(tok.text)
        open_ = self.rec_open.get(rid)
        if open_ is not None and open_[0] == "out":
            _side, src, tag, _s, _e = open_
            del self.rec_open[rid]
            self.edges.append(_PEdge(src, self.current, MATERIAL, tag, tok.start, tok.end))
        else:
            if open_ is not None:
                self.error(
                    "dangling-recycle",
                    f"recycle {rid} already has a target",
                    tok.start,
                    tok.end,
                )
                return False
            self.rec_open[rid] = ("in", self.current, None, tok.start, tok.end)
        return True

    def on_recycle_out(self, tok: Token) -> bool:
        self.attach = None
        if self.current is None:
            self.error("mark-without-node", "recycle mark has no node", tok.start, tok.end)
            return False
        tag = None
        if self.pending is not None:
            tag, _s, _e = self.pending
            self.pending = None
        rid = int(tok.text)
        open_ = self.rec_open.get(rid)
        if open_ is not None and open_[0] == "in":
            _side, dst, _tag, _s, _e = open_
            del self.rec_open[rid]
            self.edges.append(_PEdge(self.current, dst, MATERIAL, tag, tok.start, tok.end))
        else:
            if open_ is not None:
                self.error(
                    "dangling-recycle",
                    f"recycle {rid} already has a source",
                    tok.start,
                    tok.end,
                )
                return False
            self.rec_open[rid] = ("out", self.current, tag, tok.start, tok.end)
        return True

    def on_signal(self, tok: Token, side: str) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("tag-on-signal", f"tag {tag!r} cannot mark a signal", s, e)
            return False
        if self.current is None:
            self.error("mark-without-node", "signal mark has no node", tok.start, tok.end)
            return False
        sid = int(tok.text)
        open_ = self.sig_open.get(sid)
        other = "in" if side == "out" else "out"
        if open_ is not None and open_[0] == other:
            _side, occ, _s, _e = open_
            del self.sig_open[sid]
            if side == "out":
                self.edges.append(_PEdge(self.current, occ, SIGNAL, None, tok.start, tok.end))
            else:
                self.edges.append(_PEdge(occ, self.current, SIGNAL, None, tok.start, tok.end))
        else:
            if open_ is not None:
                self.error(
                    "dangling-signal",
                    f"signal {sid} already has its {side} side",
                    tok.start,
                    tok.end,
                )
                return False
            self.sig_open[sid] = (side, self.current, tok.start, tok.end)
        return True

    def on_legacy_back(self, tok: Token) -> bool:
        self.attach = None
        frame = self.frames[-1] if self.frames else None
        if frame is None or frame.kind != "legacy":
            self.error(
                "malformed-legacy",
                "backward connection is only valid inside [<(...) branches",
                tok.start,
                tok.end,
            )
            return False
        if frame.await_node:
            self.error("malformed-legacy", "doubled < mark", tok.start, tok.end)
            return False
        frame.await_node = True
        return True

    def on_train_sep(self, tok: Token) -> bool:
        self.attach = None
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
            return False
        if self.frames:
            frame = self.frames[-1]
            code = "unclosed-converging" if frame.kind == "conv" else "unclosed-branch"
            self.error(code, "still open at the train separator", frame.start, frame.start + 1)
            return False
        self.current = None
        return True

    def finish(self) -> None:
        if self.failed:
            return
        if self.pending is not None:
            tag, s, e = self.pending
            self.error("dangling-tag", f"tag {tag!r} has no stream to mark", s, e)
        for frame in self.frames:
            code = "unclosed-converging" if frame.kind == "conv" else "unclosed-branch"
            self.error(code, "still open at the end of the input", frame.start, frame.start + 1)
        for rid, (_side, _occ, _tag, s, e) in sorted(self.rec_open.items()):
            self.error("dangling-recycle", f"recycle {rid} is never matched", s, e)
        for sid, (_side, _occ, s, e) in sorted(self.sig_open.items()):
            self.error("dangling-signal", f"signal {sid} is never matched", s, e)


def _run_machine(tokens: list[Token], strict: bool, diags: ParseDiagnostics) -> _Machine:
    m = _Machine(strict, diags)
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.kind == "error":
            m.error(tok.text, _ERROR_MESSAGES[tok.text], tok.start, tok.end)
            ok = False
        elif tok.kind == "node":
            ok = m.on_node(tok)
        elif tok.kind == "brace":
            ok = m.on_brace(tok)
        elif tok.kind == "branch_open":
            legacy_next = i + 1 < n and tokens[i + 1].kind == "legacy_back"
            ok = m.on_branch_open(tok, legacy_next)
        elif tok.kind == "branch_close":
            ok = m.on_branch_close(tok)
        elif tok.kind == "conv_open":
            ok = m.on_conv_open(tok)
        elif tok.kind == "conv_connector":
            ok = m.on_connector(tok)
        elif tok.kind == "conv_close":
            ok = m.on_conv_close(tok)
        elif tok.kind == "recycle_in":
            ok = m.on_recycle_in(tok)
        elif tok.kind == "recycle_out":
            ok = m.on_recycle_out(tok)
        elif tok.kind == "signal_out":
            ok = m.on_signal(tok, "out")
        elif tok.kind == "signal_in":
            ok = m.on_signal(tok, "in")
        elif tok.kind == "legacy_back":
            ok = m.on_legacy_back(tok)
        elif tok.kind == "train_sep":
            ok = m.on_train_sep(tok)
        else:  # pragma: no cover
            raise AssertionError(f"unhandled token kind {tok.kind}")
        if not ok:
            # first error per train: skip ahead to the next separator,
            # unless the failing token was itself the separator
            if tok.kind != "train_sep":
                while i + 1 < n and tokens[i + 1].kind != "train_sep":
                    i += 1
                i += 1
            m.reset_train()
            m.failed = True
            i += 1
            continue
        i += 1
    if not m.failed:
        m.finish()
    return m


def _finalize(m: _Machine, strict: bool, diags: ParseDiagnostics) -> FlowsheetGraph | None:
    from .validate import REGISTRY

    occs = m.occs
    for occ in occs:
        if occ.category not in REGISTRY:
            if strict:
                diags.add(
                    "error",
                    "unknown-category",
                    f"category {occ.category!r} is not in the registry",
                    occ.start,
                    occ.end,
                )
            else:
                diags.add(
                    "warning",
                    "unknown-category",
                    f"treating unknown category {occ.category!r} as X",
                    occ.start,
                    occ.end,
                )
                occ.category = "X"
                occ.number = None
                occ.sub = None
        if occ.category == "C" and occ.ctrl is None:
            diags.add(
                "error",
                "missing-ctrl-code",
                "control node is missing its letter code",
                occ.start,
                occ.end,
            )
    if diags.errors():
        return None

    groups: dict[str, list[_Occ]] = {}
    for occ in occs:
        if occ.group is not None:
            groups.setdefault(occ.group, []).append(occ)
    for label in [l for l, members in groups.items() if len(members) == 1]:
        occ = groups.pop(label)[0]
        diags.add(
            "warning",
            "singleton-group",
            f"group {{{label}}} has a single member, treating it as ungrouped",
            occ.start,
            occ.end,
        )
        occ.group = None

    explicit = bool(occs) and all(occ.number is not None for occ in occs)
    honored = False
    if explicit:
        names = [
            NodeRef(occ.category, occ.number, occ.sub).name for occ in occs
        ]
        ok = len(set(names)) == len(names)
        if ok:
            for members in groups.values():
                if len({o.number for o in members}) != 1 or any(o.sub is None for o in members):
                    ok = False
                    break
        if ok:
            label_eq = {label: members[0].number for label, members in groups.items()}
            ok = len(set(label_eq.values())) == len(label_eq)
        if ok:
            # plain and sub-unit spellings of one equipment cannot coexist
            by_equipment: dict[tuple[str, int], set[bool]] = {}
            for occ in occs:
                by_equipment.setdefault((occ.category, occ.number), set()).add(occ.sub is None)
            ok = all(len(v) == 1 for v in by_equipment.values())
        honored = ok
        if not honored:
            diags.add(
                "warning",
                "renumbered",
                "explicit numbering is inconsistent, assigning fresh numbers",
                occs[0].start,
                occs[0].end,
            )
    elif any(occ.number is not None for occ in occs):
        diags.add(
            "warning",
            "mixed-numbering",
            "only some nodes carry numbers, assigning fresh numbers",
            occs[0].start,
            occs[0].end,
        )

    if not honored:
        counters: dict[str, int] = {}
        group_eq: dict[str, list[int]] = {}
        for occ in occs:
            if occ.group is not None:
                if occ.group not in group_eq:
                    counters["hex"] = counters.get("hex", 0) + 1
                    group_eq[occ.group] = [counters["hex"], 0]
                ge = group_eq[occ.group]
                ge[1] += 1
                occ.number, occ.sub = ge[0], ge[1]
            else:
                counters[occ.category] = counters.get(occ.category, 0) + 1
                occ.number, occ.sub = counters[occ.category], None

    graph = FlowsheetGraph()
    names: list[str] = []
    for occ in occs:
        ref = NodeRef(occ.category, occ.number, occ.sub)
        names.append(ref.name)
        graph.add_node(ref, ctrl=occ.ctrl)
    from .errors import GraphInvariantError

    for edge in m.edges:
        try:
            graph.add_edge(names[edge.src], names[edge.dst], kind=edge.kind, tag=edge.tag)
        except GraphInvariantError as exc:
            diags.add("error", "graph-invariant", str(exc), edge.start, edge.end)
    if diags.errors():
        return None
    return graph


def parse(text: str, strict: bool = True) -> tuple[FlowsheetGraph | None, ParseDiagnostics]:
    """Parse one SFILES string.

    Returns the reconstructed graph and the diagnostics; the graph is
    None whenever any error-level diagnostic was produced.
    """
    diags = ParseDiagnostics()
    tokens = tokenize(text)
    m = _run_machine(tokens, strict, diags)
    if m.failed or diags.errors():
        return None, diags
    graph = _finalize(m, strict, diags)
    return graph, diags


def parse_sfiles(text: str, strict: bool = True) -> FlowsheetGraph:
    """Parse one SFILES string, raising ParseError on any error."""
    graph, diags = parse(text, strict=strict)
    if graph is None:
        first = diags.errors()[0]
        raise ParseError(f"{first.code}: {first.message}", diags)
    return graph


@dataclass
class RoundtripReport:
    ok: bool
    problems: list[str]
    canonical: str

    def __bool__(self) -> bool:
        return self.ok


def _shape(graph: FlowsheetGraph):
    cats: dict[str, int] = {}
    for name in graph.nodes():
        ref = graph.node_ref(name)
        cats[ref.category] = cats.get(ref.category, 0) + 1
    kinds: dict[str, int] = {}
    tags: dict[str, int] = {}
    for _src, _dst, attr in graph.edges():
        kinds[attr.kind] = kinds.get(attr.kind, 0) + 1
        if attr.tag:
            tags[attr.tag] = tags.get(attr.tag, 0) + 1
    return cats, kinds, tags


def roundtrip_check(graph: FlowsheetGraph) -> RoundtripReport:
    """Encode, reparse and re-encode; report anything that does not survive."""
    from .encode import GENERALIZED, NUMBERED, encode

    problems: list[str] = []
    canonical = encode(graph, GENERALIZED)
    reparsed, diags = parse(canonical)
    if reparsed is None:
        for d in diags.errors():
            problems.append(f"reparse failed: {d.code}: {d.message}")
        return RoundtripReport(False, problems, str(canonical))
    again = encode(reparsed, GENERALIZED)
    if again != canonical:
        problems.append(f"not idempotent: {canonical!r} reparsed to {again!r}")
    if _shape(reparsed) != _shape(graph):
        problems.append("node or edge populations changed across the round trip")

    numbered = encode(graph, NUMBERED)
    renum, diags = parse(numbered)
    if renum is None:
        problems.append("numbered form did not reparse")
    else:
        if encode(renum, NUMBERED) != numbered:
            problems.append("numbered form is not idempotent")
        if renum != graph:
            problems.append("numbered round trip changed the graph")
    return RoundtripReport(not problems, problems, str(canonical))
