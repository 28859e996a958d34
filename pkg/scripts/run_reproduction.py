#!/usr/bin/env python3
"""End-to-end reproduction run over the shipped data.

Validates the taxonomy seed, replays the coded-statement refinement, ingests
the issue fixtures, runs a demonstration annotation session (with one seeded
disagreement resolved by adjudication), computes agreement and reliability,
and renders the full report in all three formats under out/.

With PRIVLENS_REPLICATION_DIR set to the public replication dataset the same
pipeline runs over the real corpora instead of the fixtures.
"""

from __future__ import annotations

import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from privlens import corpus as corpus_mod  # noqa: E402
from privlens import report as report_mod  # noqa: E402
from privlens import stats as stats_mod  # noqa: E402
from privlens.irr import DISTANCES, fleiss_kappa, pairwise_alpha, parse_matrix_file  # noqa: E402
from privlens.refinement import load_coded_statements, load_synonyms, run_refinement  # noqa: E402
from privlens.taxonomy import load_taxonomy  # noqa: E402
from privlens.workflow import SessionStore  # noqa: E402

DATA = ROOT / "data"
OUT = ROOT / "out"


def metric_row(metric):
    if metric is None:
        return None
    return {"min": metric.minimum, "max": metric.maximum, "mean": metric.mean,
            "mean_rounded": metric.mean_rounded, "median": metric.median,
            "mode": metric.mode}


def main() -> None:
    OUT.mkdir(exist_ok=True)
    bundle = report_mod.ReportBundle(generated_at=datetime.now(timezone.utc).isoformat())

    taxonomy = load_taxonomy(DATA / "taxonomy-v1.seed")
    counts = taxonomy.category_counts()
    bundle.input_digests["taxonomy"] = report_mod.digest_file(DATA / "taxonomy-v1.seed")
    bundle.taxonomy_validation = {
        "requirements": len(taxonomy.requirements), "categories": len(taxonomy.tree.categories),
        "category_counts": counts, "memberships": sum(counts.values()),
        "version": taxonomy.version,
    }
    print(f"taxonomy: {len(taxonomy.requirements)} requirements, "
          f"{sum(counts.values())} memberships")

    statements = load_coded_statements(DATA / "coded-statements-v1.tsv")
    synonyms = load_synonyms(DATA / "synonyms.tsv")
    _groups, merged, audit = run_refinement(statements, synonyms)
    bundle.input_digests["coded"] = report_mod.digest_file(DATA / "coded-statements-v1.tsv")
    bundle.pipeline_audit = {
        "shortlisted_per_source": audit.shortlisted_per_source,
        "identified_per_source": audit.identified_per_source,
        "merged_away": audit.merged_away, "final_count": audit.final_count,
    }
    print(f"refinement: identified {audit.identified_total}, merged away {audit.merged_away}, "
          f"final {audit.final_count}")

    replication = os.environ.get("PRIVLENS_REPLICATION_DIR")
    if replication:
        corpora = {p: Path(replication) / f"{p}.issues" for p in ("chrome", "moodle")}
        issues = {p: corpus_mod.ingest(path, "canonical-json").issues
                  for p, path in corpora.items()}
    else:
        issues = {
            "chrome": corpus_mod.ingest(DATA / "fixtures" / "chrome.monorail.csv",
                                        "monorail-csv", project="chrome").issues,
            "moodle": corpus_mod.ingest(DATA / "fixtures" / "moodle.issues.json",
                                        "jira-json").issues,
        }

    bundle.corpus_stats = {}
    for project, project_issues in issues.items():
        described = corpus_mod.descriptive_stats(project_issues)
        bundle.corpus_stats[project] = {
            "contributors": metric_row(described.contributors),
            "resolution_days": metric_row(described.resolution_days),
            "comments": metric_row(described.comments),
        }
        privacy = corpus_mod.filter_privacy_tagged(project_issues)
        sample_n = stats_mod.sample_size(len(privacy)) if privacy else 0
        print(f"{project}: {len(project_issues)} issues, {len(privacy)} privacy-tagged, "
              f"survey sample size {sample_n}")

    # demonstration annotation session over the privacy-tagged fixture issues
    all_issues = [i for per_project in issues.values() for i in per_project]
    privacy_issues = corpus_mod.filter_privacy_tagged(all_issues)
    with tempfile.TemporaryDirectory() as tmp:
        store = SessionStore(Path(tmp) / "demo.journal", valid_labels=taxonomy.by_id.keys())
        store.set_issue_metadata(all_issues)
        store.create_session("demo", "shipped-fixtures", taxonomy.version, ["c1", "c2", "c3"])
        assignment = store.assign("demo", [i.issue_id for i in privacy_issues])
        demo_labels = {
            "123403": {"R44"}, "495226": {"R38", "R39"}, "831572": {"R13", "R27", "R39"},
            "953622": set(), "602731": {"R44"}, "688412": {"R1", "R42"},
            "MDL-62904": {"R30", "R44"}, "MDL-61877": {"R1", "R44"}, "MDL-64330": {"R32"},
        }
        for issue_id, coders in assignment.items():
            for idx, coder in enumerate(coders):
                if issue_id == "527346":
                    store.submit_labels("demo", coder, issue_id, {"R26"} if idx == 0 else {"R30"})
                else:
                    store.submit_labels("demo", coder, issue_id, demo_labels.get(issue_id, set()))
        disagreements, _pending = store.disagreements("demo")
        store.begin_adjudication("demo")
        store.adjudicate("demo", "527346", {"R30"}, "reclassified", ["c1", "c2", "c3"],
                         note="management state shown in the user interface")
        store.resolve_unanimous("demo", ["c1", "c2", "c3"])
        gold = store.finalize("demo")
        agreement = store.percent_total_agreement("demo")
        labels_by_coder = store.labels_by_coder("demo")

        bundle.irr_results = []
        for matrix_name, scope in (("gdpr-judgments.matrix", "statement judgments (GDPR)"),
                                   ("iso-judgments.matrix", "statement judgments (ISO/IEC 29100)")):
            result = fleiss_kappa(parse_matrix_file((DATA / "irr" / matrix_name).read_text()))
            bundle.input_digests[f"fleiss:{matrix_name}"] = report_mod.digest_file(DATA / "irr" / matrix_name)
            bundle.irr_results.append({
                "statistic": result.statistic, "scope": scope, "value": result.value,
                "n_units": result.n_units, "n_skipped": 0, "degenerate": result.degenerate,
            })
            print(f"fleiss kappa [{scope}]: {result.value:.4f}")
        for pair in (("c1", "c2"), ("c1", "c3")):
            result = pairwise_alpha(labels_by_coder, *pair, DISTANCES["masi"])
            bundle.irr_results.append({
                "statistic": result.statistic, "scope": f"demo session {pair[0]},{pair[1]}",
                "distance": "masi", "value": result.value, "n_units": result.n_units,
                "n_skipped": result.n_skipped, "degenerate": result.degenerate,
            })
            print(f"alpha[masi] {pair[0]},{pair[1]}: {result.value:.3f} "
                  f"over {result.n_units} issues")
        print(f"total agreement: {agreement:.2%}; "
              f"{len(disagreements)} disagreement(s) adjudicated")

        gold_by_issue = {r.issue_id: list(r.labels) for r in gold.records}
        gold_by_project: dict[str, dict[str, list[str]]] = {}
        for record in gold.records:
            gold_by_project.setdefault(record.project or "unknown", {})[record.issue_id] = list(record.labels)

        bundle.coverage = {}
        bundle.rankings = {}
        for project, project_gold in sorted(gold_by_project.items()):
            table = stats_mod.coverage_by_category(project_gold, taxonomy)
            bundle.coverage[project] = table.percentages
            types = {i.issue_id: i.issue_type for i in all_issues}
            bundle.rankings[project] = [
                {"requirement_id": e.requirement_id, "count": e.count, "by_type": e.by_type}
                for e in stats_mod.top_requirements(project_gold, 10, issue_types=types)
            ]
        (OUT / "gold-demo.labels").write_text(
            gold.to_jsonl(), encoding="utf-8")

    # rank-sum demonstration: privacy vs non-privacy resolution time and comments
    bundle.test_results = []
    for project, project_issues in issues.items():
        privacy_ids = {i.issue_id for i in corpus_mod.filter_privacy_tagged(
            project_issues, statuses=["assigned", "fixed", "verified", "wontfix"])}
        non_privacy = [i for i in project_issues if i.issue_id not in privacy_ids]
        privacy = [i for i in project_issues if i.issue_id in privacy_ids]
        if not non_privacy or not privacy:
            continue
        for attribute, values in (
                ("resolution time", lambda i: i.resolution_days),
                ("comments", lambda i: i.comments)):
            x = [values(i) for i in non_privacy if values(i) is not None]
            y = [values(i) for i in privacy if values(i) is not None]
            if not x or not y:
                continue
            alternative = "less" if stats_mod.mann_whitney(x, y, "less").cles < 0.5 else "greater"
            result = stats_mod.mann_whitney(x, y, alternative)
            bundle.test_results.append({
                "project": project, "attribute": attribute, "alternative": alternative,
                "p_value": result.p_value, "cles": result.cles, "rbc": result.rbc,
                "method": result.method,
            })

    for fmt, name in (("machine-readable", "report.json"), ("markdown", "report.md"),
                      ("aligned-text", "report.txt")):
        (OUT / name).write_text(report_mod.render_report(bundle, fmt), encoding="utf-8")
    print(f"reports written to {OUT}/report.{{json,md,txt}}")


if __name__ == "__main__":
    main()
