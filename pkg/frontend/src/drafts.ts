// Client-side draft persistence. Selections survive reloads, keyed by
// (session, issue, coder); the service never sees a draft.

export interface Draft {
  labels: string[];
  note: string;
  savedAt: string;
}

type StorageLike = Pick<Storage, "getItem" | "setItem" | "removeItem">;

export class DraftStore {
  constructor(private readonly storage: StorageLike) {}

  private key(session: string, issue: string, coder: string): string {
    return `privlens:draft:${session}:${issue}:${coder}`;
  }

  save(session: string, issue: string, coder: string, labels: Iterable<string>, note = ""): Draft {
    const draft: Draft = {
      labels: [...labels].sort(),
      note,
      savedAt: new Date().toISOString(),
    };
    this.storage.setItem(this.key(session, issue, coder), JSON.stringify(draft));
    return draft;
  }

  load(session: string, issue: string, coder: string): Draft | null {
    const raw = this.storage.getItem(this.key(session, issue, coder));
    if (raw === null) return null;
    try {
      const parsed = JSON.parse(raw) as Draft;
      if (!Array.isArray(parsed.labels)) return null;
      return { labels: parsed.labels, note: parsed.note ?? "", savedAt: parsed.savedAt ?? "" };
    } catch {
      return null;
    }
  }

  clear(session: string, issue: string, coder: string): void {
    this.storage.removeItem(this.key(session, issue, coder));
  }
}

/** In-memory stand-in used by tests and non-browser contexts. */
export class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? (this.data.get(key) as string) : null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }
}
