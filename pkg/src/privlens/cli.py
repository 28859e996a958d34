"""privlens command-line interface.

Subcommands mirror the library modules: taxonomy, refine, ingest, corpus,
session, irr, stats, report, serve.  File formats are the same ones the HTTP
service speaks, so outputs are interchangeable between the two front doors.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import irr as irr_mod
from . import refinement as refine_mod
from . import report as report_mod
from . import stats as stats_mod
from . import taxonomy as taxonomy_mod
from . import workflow as workflow_mod


def _fail(message: str) -> None:
    raise click.ClickException(message)


@click.group()
def main() -> None:
    """Privacy-requirements taxonomy workbench."""


# -- taxonomy ---------------------------------------------------------------

@main.group()
def taxonomy() -> None:
    """Validate and query the requirements taxonomy."""


@taxonomy.command("validate")
@click.argument("seed", type=click.Path(exists=True, path_type=Path))
@click.option("--any-size", is_flag=True, help="Skip the shipped-seed shape checks.")
def taxonomy_validate(seed: Path, any_size: bool) -> None:
    """Validate a taxonomy seed file and print its shape."""
    try:
        t = taxonomy_mod.load_taxonomy(seed, expected_total=None if any_size else taxonomy_mod.EXPECTED_TOTAL)
    except (taxonomy_mod.TaxonomyParseError, taxonomy_mod.TaxonomyValidationError) as exc:
        _fail(str(exc))
    counts = t.category_counts()
    click.echo(f"valid: {len(t.requirements)} requirements, version {t.version}")
    for cid, count in counts.items():
        click.echo(f"  {cid}: {count}")
    click.echo(f"  memberships total: {sum(counts.values())}")


@taxonomy.command("trace")
@click.argument("req_id")
@click.option("--seed", type=click.Path(exists=True, path_type=Path),
              default=taxonomy_mod.DEFAULT_SEED, show_default=True)
def taxonomy_trace(req_id: str, seed: Path) -> None:
    """Print one requirement's regulation references grouped by source."""
    t = taxonomy_mod.load_taxonomy(seed)
    try:
        refs = taxonomy_mod.trace_requirement(t, req_id)
    except taxonomy_mod.NotFoundError as exc:
        _fail(str(exc.args[0]))
    click.echo(f"{req_id}: {t.by_id[req_id].text}")
    for source, locators in refs.items():
        click.echo(f"  {source}: {', '.join(locators)}")


# -- refinement ---------------------------------------------------------------

@main.group()
def refine() -> None:
    """Run the coded-statement refinement pipeline."""


def _load_refinement_inputs(coded: Path, synonyms: Path | None):
    table = refine_mod.load_synonyms(synonyms) if synonyms else refine_mod.DEFAULT_SYNONYMS
    return refine_mod.load_coded_statements(coded), table


@refine.command("run")
@click.argument("coded", type=click.Path(exists=True, path_type=Path))
@click.option("--synonyms", type=click.Path(exists=True, path_type=Path))
@click.option("--audit", is_flag=True, help="Print the pipeline audit counts.")
@click.option("-o", "--output", type=click.Path(path_type=Path),
              help="Write merged requirements as JSON lines.")
def refine_run(coded: Path, synonyms: Path | None, audit: bool, output: Path | None) -> None:
    """Group, merge and audit a coded-statement file."""
    statements, table = _load_refinement_inputs(coded, synonyms)
    try:
        groups, merged, audit_result = refine_mod.run_refinement(statements, table)
    except refine_mod.RefinementError as exc:
        _fail(str(exc))
    click.echo(f"{len(statements)} statements -> {len(groups)} groups -> {len(merged)} requirements")
    if audit:
        click.echo("shortlisted: " + ", ".join(
            f"{s}={n}" for s, n in audit_result.shortlisted_per_source.items()))
        click.echo("identified:  " + ", ".join(
            f"{s}={n}" for s, n in audit_result.identified_per_source.items())
            + f" (total {audit_result.identified_total})")
        click.echo(f"merged away: {audit_result.merged_away}")
        click.echo(f"final:       {audit_result.final_count}")
    if output:
        with output.open("w", encoding="utf-8") as fh:
            for m in merged:
                fh.write(json.dumps({
                    "goal_key": m.goal_key, "text": m.text,
                    "provenance": [str(ref) for ref in m.provenance],
                    "needs_review": m.needs_review,
                }, ensure_ascii=False) + "\n")
        click.echo(f"wrote {len(merged)} merged requirements to {output}")


@refine.command("check-inconsistencies")
@click.argument("coded", type=click.Path(exists=True, path_type=Path))
@click.option("--synonyms", type=click.Path(exists=True, path_type=Path))
def refine_check(coded: Path, synonyms: Path | None) -> None:
    """Report contradictory statement pairs (never deletes anything)."""
    statements, table = _load_refinement_inputs(coded, synonyms)
    reports = refine_mod.detect_inconsistencies(statements, table)
    if not reports:
        click.echo("no inconsistencies found")
        return
    for item in reports:
        click.echo(item.describe())
    sys.exit(1)


# -- corpus -------------------------------------------------------------------

@main.command("ingest")
@click.argument("export_file", type=click.Path(exists=True, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(corpus_mod.FORMATS), required=True)
@click.option("--project", default="", help="Project name when the export has none.")
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
def ingest_cmd(export_file: Path, fmt: str, project: str, output: Path) -> None:
    """Parse a tracker export into the canonical issue format."""
    try:
        result = corpus_mod.ingest(export_file, fmt, project=project)
    except corpus_mod.CorpusError as exc:
        _fail(str(exc))
    output.write_text(corpus_mod.emit_canonical(result.issues), encoding="utf-8")
    click.echo(f"{len(result.issues)} issues written to {output}, {result.skipped} rows skipped")
    for row, reason in result.skipped_rows:
        click.echo(f"  skipped row {row}: {reason}", err=True)


@main.group()
def corpus() -> None:
    """Inspect and filter canonical issue files."""


@corpus.command("stats")
@click.argument("issues_file", type=click.Path(exists=True, path_type=Path))
def corpus_stats(issues_file: Path) -> None:
    """Descriptive statistics over a canonical issue file."""
    issues = corpus_mod.ingest(issues_file, "canonical-json").issues
    try:
        described = corpus_mod.descriptive_stats(issues)
    except corpus_mod.CorpusError as exc:
        _fail(str(exc))
    click.echo(f"{described.n_issues} issues ({described.n_resolved} resolved)")
    rows = [("contributors", described.contributors),
            ("resolution days", described.resolution_days),
            ("comments", described.comments)]
    for name, metric in rows:
        if metric is None:
            click.echo(f"  {name}: no resolved issues")
            continue
        click.echo(f"  {name}: min {metric.minimum:g}  max {metric.maximum:g}  "
                   f"mean {metric.mean_rounded}  median {metric.median:g}  mode {metric.mode:g}")


@corpus.command("filter")
@click.argument("issues_file", type=click.Path(exists=True, path_type=Path))
@click.option("--tag", default=corpus_mod.DEFAULT_PRIVACY_TAG, show_default=True)
@click.option("--status", default="assigned,fixed,verified", show_default=True)
@click.option("--flag-low-info", is_flag=True,
              help="Also list issues flagged as low-information.")
@click.option("--min-tokens", default=corpus_mod.DEFAULT_MIN_CONTENT_TOKENS, show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path))
def corpus_filter(issues_file: Path, tag: str, status: str, flag_low_info: bool,
                  min_tokens: int, output: Path | None) -> None:
    """Keep issues tagged with TAG in an allowed status."""
    issues = corpus_mod.ingest(issues_file, "canonical-json").issues
    statuses = [s for s in status.split(",") if s.strip()]
    kept = corpus_mod.filter_privacy_tagged(issues, tag=tag, statuses=statuses)
    click.echo(f"{len(kept)} of {len(issues)} issues tagged {tag!r} with status in {statuses}")
    if flag_low_info:
        for issue in kept:
            if corpus_mod.flag_low_information(issue, min_tokens):
                click.echo(f"  low-information: {issue.issue_id} ({issue.title})")
    if output:
        output.write_text(corpus_mod.emit_canonical(kept), encoding="utf-8")
        click.echo(f"wrote {len(kept)} issues to {output}")


# -- sessions -----------------------------------------------------------------

@main.group()
def session() -> None:
    """Multi-coder annotation sessions over a journal store."""


STORE_OPT = click.option("--store", type=click.Path(path_type=Path), required=True,
                         help="Journal file backing the session store.")
SEED_OPT = click.option("--seed", type=click.Path(exists=True, path_type=Path),
                        default=taxonomy_mod.DEFAULT_SEED, show_default=True)
SID_OPT = click.option("--id", "session_id", required=True)


def _open_store(store: Path, seed: Path) -> workflow_mod.SessionStore:
    t = taxonomy_mod.load_taxonomy(seed)
    return workflow_mod.SessionStore(store, valid_labels=t.by_id.keys())


@session.command("create")
@STORE_OPT
@SEED_OPT
@SID_OPT
@click.option("--coders", required=True, help="Comma-separated coder ids.")
@click.option("--corpus", "corpus_file", type=click.Path(exists=True, path_type=Path),
              help="Canonical issue file to assign.")
@click.option("--scheme", default="primary-split", show_default=True)
def session_create(store: Path, seed: Path, session_id: str, coders: str,
                   corpus_file: Path | None, scheme: str) -> None:
    """Create a session and assign the corpus to its coders."""
    store_obj = _open_store(store, seed)
    coder_list = [c.strip() for c in coders.split(",") if c.strip()]
    try:
        store_obj.create_session(session_id, str(corpus_file or ""), "1.0.0", coder_list)
        if corpus_file:
            issues = corpus_mod.ingest(corpus_file, "canonical-json").issues
            store_obj.set_issue_metadata(issues)
            assignment = store_obj.assign(session_id, [i.issue_id for i in issues], scheme=scheme)
            click.echo(f"session {session_id}: {len(assignment)} issues assigned to "
                       f"{len(coder_list)} coders ({scheme})")
        else:
            click.echo(f"session {session_id} created (no corpus assigned yet)")
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))


@session.command("assign")
@STORE_OPT
@SEED_OPT
@SID_OPT
@click.option("--corpus", "corpus_file", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--scheme", default="primary-split", show_default=True)
def session_assign(store: Path, seed: Path, session_id: str, corpus_file: Path, scheme: str) -> None:
    """Assign a corpus to an existing session."""
    store_obj = _open_store(store, seed)
    issues = corpus_mod.ingest(corpus_file, "canonical-json").issues
    try:
        assignment = store_obj.assign(session_id, [i.issue_id for i in issues], scheme=scheme)
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    click.echo(f"{len(assignment)} issues assigned")


@session.command("label")
@STORE_OPT
@SEED_OPT
@SID_OPT
@click.option("--coder", required=True)
@click.option("--issue", required=True)
@click.option("--labels", default="", help="Comma-separated requirement ids (empty allowed).")
@click.option("--expected-version", type=int, default=None)
def session_label(store: Path, seed: Path, session_id: str, coder: str, issue: str,
                  labels: str, expected_version: int | None) -> None:
    """Submit one coder's label set for one issue."""
    store_obj = _open_store(store, seed)
    label_set = [l.strip() for l in labels.split(",") if l.strip()]
    try:
        record = store_obj.submit_labels(session_id, coder, issue, label_set,
                                         expected_version=expected_version)
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    click.echo(f"{issue} {coder} v{record.version}: {sorted(record.labels) or '{}'}")


@session.command("status")
@STORE_OPT
@SEED_OPT
@SID_OPT
def session_status(store: Path, seed: Path, session_id: str) -> None:
    """Show session state, pending issues and disagreement count."""
    store_obj = _open_store(store, seed)
    try:
        sess = store_obj.sessions[session_id]
    except KeyError:
        _fail(f"unknown session {session_id}")
    disagreements, pending = store_obj.disagreements(session_id)
    click.echo(f"session {session_id}: state={sess.state} coders={','.join(sess.coders)}")
    click.echo(f"  issues: {len(sess.assignment)}  pending: {len(pending)}  "
               f"disagreements: {len(disagreements)}  finals: {len(sess.finals)}")
    if not pending and sess.assignment:
        click.echo(f"  total agreement: {store_obj.percent_total_agreement(session_id):.2%}")


@session.command("disagreements")
@STORE_OPT
@SEED_OPT
@SID_OPT
def session_disagreements(store: Path, seed: Path, session_id: str) -> None:
    """List issues whose coders' label sets differ, with MASI distance."""
    store_obj = _open_store(store, seed)
    try:
        disagreements, pending = store_obj.disagreements(session_id)
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    for d in disagreements:
        sets = "  vs  ".join(f"{coder}:{sorted(labels) or '{}'}" for coder, labels in d.label_sets)
        click.echo(f"{d.issue_id}  masi={d.masi:.3f}  {sets}")
    if pending:
        click.echo(f"pending submissions: {', '.join(sorted(pending))}")


@session.command("begin-adjudication")
@STORE_OPT
@SEED_OPT
@SID_OPT
def session_begin_adjudication(store: Path, seed: Path, session_id: str) -> None:
    """Move the session from open to adjudicating."""
    store_obj = _open_store(store, seed)
    try:
        store_obj.begin_adjudication(session_id)
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    click.echo(f"session {session_id} is adjudicating")


@session.command("adjudicate")
@STORE_OPT
@SEED_OPT
@SID_OPT
@click.option("--issue", required=True)
@click.option("--final", default="", help="Comma-separated final requirement ids.")
@click.option("--resolution", type=click.Choice(workflow_mod.RESOLUTIONS), required=True)
@click.option("--adjudicators", required=True)
@click.option("--note", default="")
def session_adjudicate(store: Path, seed: Path, session_id: str, issue: str, final: str,
                       resolution: str, adjudicators: str, note: str) -> None:
    """Record the final label set for one issue."""
    store_obj = _open_store(store, seed)
    try:
        record = store_obj.adjudicate(
            session_id, issue, [l.strip() for l in final.split(",") if l.strip()],
            resolution, [a.strip() for a in adjudicators.split(",") if a.strip()], note)
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    click.echo(f"{issue} -> {sorted(record.labels) or '{}'} ({record.resolution})")


@session.command("resolve-unanimous")
@STORE_OPT
@SEED_OPT
@SID_OPT
@click.option("--adjudicators", required=True)
def session_resolve_unanimous(store: Path, seed: Path, session_id: str, adjudicators: str) -> None:
    """Bulk-confirm all unanimous issues as final."""
    store_obj = _open_store(store, seed)
    try:
        count = store_obj.resolve_unanimous(
            session_id, [a.strip() for a in adjudicators.split(",") if a.strip()])
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    click.echo(f"confirmed {count} unanimous issues")


@session.command("finalize")
@STORE_OPT
@SEED_OPT
@SID_OPT
@click.option("-o", "--output", type=click.Path(path_type=Path),
              help="Write the gold dataset export here.")
def session_finalize(store: Path, seed: Path, session_id: str, output: Path | None) -> None:
    """Finalize the session and export the gold dataset."""
    store_obj = _open_store(store, seed)
    try:
        gold = store_obj.finalize(session_id)
    except workflow_mod.WorkflowError as exc:
        _fail(str(exc))
    text = gold.to_jsonl()
    if output:
        output.write_text(text, encoding="utf-8")
        click.echo(f"gold dataset with {len(gold.records)} issues written to {output}")
    else:
        click.echo(text, nl=False)


# -- irr ------------------------------------------------------------------------

@main.group()
def irr() -> None:
    """Inter-rater reliability metrics."""


def _labels_from_file(path: Path) -> dict[str, dict[str, frozenset[str]]]:
    """Read coder labels from a session journal or a plain JSONL of
    {issue, coder, labels} records."""
    text = path.read_text(encoding="utf-8")
    by_coder: dict[str, dict[str, frozenset[str]]] = {}
    journal_events = []
    for line in text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if "event" in record:
            journal_events.append(record)
        else:
            by_coder.setdefault(record["coder"], {})[record["issue"]] = frozenset(record["labels"])
    if journal_events:
        import tempfile

        with tempfile.NamedTemporaryFile("w", suffix=".journal", delete=False) as fh:
            fh.write(text)
            tmp = fh.name
        store = workflow_mod.SessionStore(tmp)
        for sid in store.sessions:
            for coder, labels in store.labels_by_coder(sid).items():
                by_coder.setdefault(coder, {}).update(labels)
    return by_coder


@irr.command("alpha")
@click.argument("labels_file", type=click.Path(exists=True, path_type=Path))
@click.option("--distance", type=click.Choice(sorted(irr_mod.DISTANCES)), default="masi",
              show_default=True)
@click.option("--pair", required=True, help="Two coder ids, comma separated.")
@click.option("--bootstrap", type=int, default=0,
              help="Bootstrap iterations for a confidence interval (0 = off).")
@click.option("--seed", "rng_seed", type=int, default=0, show_default=True)
def irr_alpha(labels_file: Path, distance: str, pair: str, bootstrap: int, rng_seed: int) -> None:
    """Krippendorff's alpha between two coders."""
    coders = [c.strip() for c in pair.split(",") if c.strip()]
    if len(coders) != 2:
        _fail("--pair must name exactly 2 coders")
    labels = _labels_from_file(labels_file)
    try:
        result = irr_mod.pairwise_alpha(labels, coders[0], coders[1], irr_mod.DISTANCES[distance])
    except irr_mod.IrrError as exc:
        _fail(str(exc))
    flag = " (degenerate: all labelings identical)" if result.degenerate else ""
    click.echo(f"alpha[{distance}] {coders[0]},{coders[1]} = {result.value:.3f} "
               f"over {result.n_units} issues ({result.n_skipped} skipped){flag}")
    if bootstrap:
        common = sorted(set(labels[coders[0]]) & set(labels[coders[1]]))
        units = [(i, [(coders[0], labels[coders[0]][i]), (coders[1], labels[coders[1]][i])])
                 for i in common]
        interval = irr_mod.bootstrap_alpha(units, irr_mod.DISTANCES[distance],
                                           iterations=bootstrap, seed=rng_seed)
        click.echo(f"  {interval.level:.0%} bootstrap interval: "
                   f"[{interval.low:.3f}, {interval.high:.3f}] ({bootstrap} iterations)")


@irr.command("fleiss")
@click.argument("matrix_file", type=click.Path(exists=True, path_type=Path))
def irr_fleiss(matrix_file: Path) -> None:
    """Fleiss' kappa over a ratings-matrix file."""
    try:
        matrix = irr_mod.parse_matrix_file(matrix_file.read_text(encoding="utf-8"))
        result = irr_mod.fleiss_kappa(matrix)
    except irr_mod.IrrError as exc:
        _fail(str(exc))
    flag = " (degenerate: single category)" if result.degenerate else ""
    click.echo(f"fleiss kappa = {result.value:.4f} over {result.n_units} items, "
               f"{matrix.coders_per_item} coders{flag}")


# -- stats -----------------------------------------------------------------------

@main.group()
def stats() -> None:
    """Sampling, rank-sum tests, coverage and rankings."""


def _read_sample(path: Path) -> list[float]:
    values = []
    for token in path.read_text(encoding="utf-8").replace(",", " ").split():
        values.append(float(token))
    return values


@stats.command("mw")
@click.argument("sample_a", type=click.Path(exists=True, path_type=Path))
@click.argument("sample_b", type=click.Path(exists=True, path_type=Path))
@click.option("--alt", type=click.Choice(stats_mod.ALTERNATIVES), default="two-sided",
              show_default=True)
def stats_mw(sample_a: Path, sample_b: Path, alt: str) -> None:
    """Wilcoxon rank-sum test of SAMPLE_A against SAMPLE_B.

    The U statistic counts wins of the first sample; the one-sided tails
    follow the same orientation (less: first sample tends below second).
    """
    try:
        result = stats_mod.mann_whitney(_read_sample(sample_a), _read_sample(sample_b), alt)
    except stats_mod.StatsError as exc:
        _fail(str(exc))
    click.echo(f"U = {result.u_statistic:g} ({result.n_x} vs {result.n_y}, {result.method})")
    click.echo(f"p[{alt}] = {result.render_p()} (exact value {result.p_value:.6g})")
    click.echo(f"effect sizes: cles = {result.cles:.3f}, rank-biserial = {result.rbc:.3f}")


@stats.command("samplesize")
@click.argument("population", type=int)
@click.option("--confidence", type=float, default=0.95, show_default=True)
@click.option("--interval", type=float, default=5.0, show_default=True,
              help="Margin of error in percentage points.")
@click.option("--proportion", type=float, default=0.5, show_default=True)
def stats_samplesize(population: int, confidence: float, interval: float, proportion: float) -> None:
    """Required survey sample size with finite-population correction."""
    if confidence != 0.95:
        _fail("only the 95% confidence level is tabulated (z = 1.959964)")
    cfg = stats_mod.SamplingConfig(confidence=confidence, interval=interval, proportion=proportion)
    try:
        click.echo(stats_mod.sample_size(population, cfg))
    except stats_mod.StatsError as exc:
        _fail(str(exc))


@stats.command("coverage")
@click.argument("gold_file", type=click.Path(exists=True, path_type=Path))
@click.argument("seed", type=click.Path(exists=True, path_type=Path))
def stats_coverage(gold_file: Path, seed: Path) -> None:
    """Per-category occurrence percentages of a gold dataset."""
    t = taxonomy_mod.load_taxonomy(seed)
    gold = workflow_mod.load_gold(gold_file)
    try:
        table = stats_mod.coverage_by_category(gold, t)
    except stats_mod.StatsError as exc:
        _fail(str(exc))
    click.echo(f"{table.n_issues} issues")
    for category, pct in table.percentages.items():
        click.echo(f"  {category}: {pct:.2f}% ({table.counts[category]} issues)")


@stats.command("top")
@click.argument("gold_file", type=click.Path(exists=True, path_type=Path))
@click.option("-k", type=int, default=10, show_default=True)
@click.option("--by-type", is_flag=True, help="Break counts down by issue type.")
@click.option("--corpus", "corpus_file", type=click.Path(exists=True, path_type=Path),
              help="Canonical issue file supplying issue types.")
def stats_top(gold_file: Path, k: int, by_type: bool, corpus_file: Path | None) -> None:
    """Top requirements by occurrence count."""
    gold = workflow_mod.load_gold(gold_file)
    issue_types = None
    if by_type:
        issue_types = {}
        if corpus_file:
            for issue in corpus_mod.ingest(corpus_file, "canonical-json").issues:
                issue_types[issue.issue_id] = issue.issue_type
    try:
        ranking = stats_mod.top_requirements(gold, k, issue_types)
    except stats_mod.StatsError as exc:
        _fail(str(exc))
    for rank, entry in enumerate(ranking, start=1):
        line = f"{rank:3d}. {entry.requirement_id}: {entry.count}"
        if by_type and entry.by_type:
            line += "  (" + ", ".join(f"{t}={n}" for t, n in entry.by_type.items()) + ")"
        click.echo(line)


# -- report & serve ----------------------------------------------------------------

@main.group()
def report() -> None:
    """Assemble and render reproduction reports."""


@report.command("build")
@click.option("--taxonomy", "seed", type=click.Path(exists=True, path_type=Path))
@click.option("--coded", type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpora", multiple=True, metavar="NAME=PATH",
              help="Canonical issue file per project (repeatable).")
@click.option("--gold", "golds", multiple=True, metavar="NAME=PATH",
              help="Gold dataset per project (repeatable).")
@click.option("--fleiss", "fleiss_inputs", multiple=True, metavar="NAME=PATH",
              help="Ratings matrix file (repeatable).")
@click.option("--top-k", type=int, default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(report_mod.FORMATS),
              default="aligned-text", show_default=True)
@click.option("--csv-dir", type=click.Path(path_type=Path),
              help="Also write each tabular section as <section>.csv here.")
@click.option("-o", "--output", type=click.Path(path_type=Path))
def report_build(seed, coded, corpora, golds, fleiss_inputs, top_k, fmt, csv_dir, output) -> None:
    """Build a report bundle from whatever inputs are given; the rest are
    marked skipped."""
    bundle = report_mod.ReportBundle(generated_at=datetime.now(timezone.utc).isoformat())

    def parse_named(items):
        out = {}
        for item in items:
            name, sep, path = item.partition("=")
            if not sep:
                _fail(f"expected NAME=PATH, got {item!r}")
            out[name] = Path(path)
        return out

    t = None
    if seed:
        t = taxonomy_mod.load_taxonomy(seed)
        counts = t.category_counts()
        bundle.input_digests["taxonomy"] = report_mod.digest_file(seed)
        bundle.taxonomy_validation = {
            "requirements": len(t.requirements),
            "categories": len(t.tree.categories),
            "category_counts": counts,
            "memberships": sum(counts.values()),
            "version": t.version,
        }
    else:
        bundle.skip("taxonomy_validation", "no seed file given")

    if coded:
        statements = refine_mod.load_coded_statements(coded)
        _groups, _merged, audit = refine_mod.run_refinement(statements)
        bundle.input_digests["coded"] = report_mod.digest_file(coded)
        bundle.pipeline_audit = {
            "shortlisted_per_source": audit.shortlisted_per_source,
            "identified_per_source": audit.identified_per_source,
            "merged_away": audit.merged_away,
            "final_count": audit.final_count,
        }
    else:
        bundle.skip("pipeline_audit", "no coded-statement file given")

    corpora = parse_named(corpora)
    if corpora:
        bundle.corpus_stats = {}
        for name, path in corpora.items():
            issues = corpus_mod.ingest(path, "canonical-json").issues
            described = corpus_mod.descriptive_stats(issues)
            bundle.input_digests[f"corpus:{name}"] = report_mod.digest_file(path)

            def row(metric):
                if metric is None:
                    return None
                return {"min": metric.minimum, "max": metric.maximum,
                        "mean": metric.mean, "mean_rounded": metric.mean_rounded,
                        "median": metric.median, "mode": metric.mode}

            bundle.corpus_stats[name] = {
                "contributors": row(described.contributors),
                "resolution_days": row(described.resolution_days),
                "comments": row(described.comments),
            }
    else:
        bundle.skip("corpus_stats", "no corpus files given")

    fleiss_inputs = parse_named(fleiss_inputs)
    if fleiss_inputs:
        bundle.irr_results = []
        for name, path in fleiss_inputs.items():
            result = irr_mod.fleiss_kappa(irr_mod.parse_matrix_file(path.read_text(encoding="utf-8")))
            bundle.input_digests[f"fleiss:{name}"] = report_mod.digest_file(path)
            bundle.irr_results.append({
                "statistic": result.statistic, "scope": name, "value": result.value,
                "n_units": result.n_units, "n_skipped": result.n_skipped,
                "degenerate": result.degenerate,
            })
    else:
        bundle.skip("irr_results", "no reliability inputs given")

    golds = parse_named(golds)
    if golds and t is not None:
        bundle.coverage = {}
        bundle.rankings = {}
        for name, path in golds.items():
            gold = workflow_mod.load_gold(path)
            bundle.input_digests[f"gold:{name}"] = report_mod.digest_file(path)
            bundle.coverage[name] = stats_mod.coverage_by_category(gold, t).percentages
            bundle.rankings[name] = [
                {"requirement_id": e.requirement_id, "count": e.count}
                for e in stats_mod.top_requirements(gold, top_k)
            ]
    else:
        reason = "no gold datasets given" if t is not None else "coverage needs the taxonomy seed"
        bundle.skip("coverage", reason)
        bundle.skip("rankings", reason)

    bundle.skip("test_results", "rank-sum comparisons need the sampled corpora; "
                "run `privlens stats mw` directly")

    text = report_mod.render_report(bundle, fmt)
    if csv_dir:
        csv_dir.mkdir(parents=True, exist_ok=True)
        for section, body in report_mod.render_tables_csv(bundle).items():
            (csv_dir / f"{section}.csv").write_text(body, encoding="utf-8")
        click.echo(f"csv tables written to {csv_dir}")
    if output:
        output.write_text(text, encoding="utf-8")
        click.echo(f"report written to {output}")
    else:
        click.echo(text, nl=False)


@main.command("serve")
@click.option("--store", type=click.Path(path_type=Path), required=True)
@click.option("--taxonomy", "seed", type=click.Path(exists=True, path_type=Path),
              default=taxonomy_mod.DEFAULT_SEED, show_default=True)
@click.option("--corpus", "corpus_file", type=click.Path(exists=True, path_type=Path))
@click.option("--bind", default="127.0.0.1:8571", show_default=True)
@click.option("--cors", default="", help="Comma-separated allowed origins.")
def serve_cmd(store: Path, seed: Path, corpus_file: Path | None, bind: str, cors: str) -> None:
    """Run the HTTP service for the annotation UI."""
    from .service import ServiceConfig, serve

    host, _, port = bind.partition(":")
    config = ServiceConfig(
        store_path=store,
        taxonomy_path=seed,
        corpus_path=corpus_file,
        host=host or "127.0.0.1",
        port=int(port or 8571),
        cors_origins=tuple(o.strip() for o in cors.split(",") if o.strip()),
    )
    serve(config)


if __name__ == "__main__":
    main()
