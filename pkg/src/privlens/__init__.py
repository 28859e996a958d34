"""privlens: a workbench for privacy-requirements mining in issue reports.

Subsystems: the regulation-derived requirements taxonomy with traceability
(`taxonomy`), refinement of coded regulation statements (`refinement`),
issue-tracker corpus ingestion and statistics (`corpus`), journaled
multi-coder annotation sessions (`workflow`), inter-rater reliability
metrics (`irr`), sampling and rank-sum analyses (`stats`), report rendering
(`report`), and the CLI/HTTP front doors (`cli`, `service`).
"""

__version__ = "0.1.0"
