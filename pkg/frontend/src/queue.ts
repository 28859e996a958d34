// Work-queue model: a coder's assigned issues split into pending and done.

import type { Api } from "./api";
import type { Assignment, AssignmentEntry, SessionStatus } from "./types";

export class WorkQueue {
  entries: AssignmentEntry[] = [];
  session: SessionStatus | null = null;

  constructor(
    private readonly api: Api,
    readonly sessionId: string,
    readonly coder: string,
  ) {}

  async refresh(): Promise<void> {
    const [assignment, session]: [Assignment, SessionStatus] = await Promise.all([
      this.api.getAssignment(this.sessionId, this.coder),
      this.api.getSession(this.sessionId),
    ]);
    this.entries = assignment.issues;
    this.session = session;
  }

  pending(): AssignmentEntry[] {
    return this.entries.filter((entry) => !entry.submitted);
  }

  completed(): AssignmentEntry[] {
    return this.entries.filter((entry) => entry.submitted);
  }

  completedCount(): number {
    return this.completed().length;
  }
}
