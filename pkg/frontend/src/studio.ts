// Studio state machine. The server is the single source of truth: every
// displayed production is the latest server payload, mutations run one at a
// time, and the choices hash is checked against the snapshot hash so a
// stale view can never be mistaken for current state.

import { ApiClient } from "./api";
import type {
  ChoiceDoc,
  ColorMode,
  GrammarDoc,
  ModelDoc,
  SnapshotPayload,
} from "./types";

export interface StudioView {
  session: string | null;
  snapshot: SnapshotPayload | null;
  grammar: GrammarDoc | null;
  choices: ChoiceDoc[];
  selected: number | null; // index into snapshot.placed_blocks
  ghost: ChoiceDoc | null;
  colorMode: ColorMode;
  busy: boolean;
  banner: string | null;
  notice: string | null;
}

type Listener = (view: StudioView) => void;

export class Studio {
  private view: StudioView = {
    session: null,
    snapshot: null,
    grammar: null,
    choices: [],
    selected: null,
    ghost: null,
    colorMode: "shape",
    busy: false,
    banner: null,
    notice: null,
  };
  private queue: Promise<unknown> = Promise.resolve();
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.view);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  getView(): StudioView {
    return this.view;
  }

  private patch(partial: Partial<StudioView>): void {
    this.view = { ...this.view, ...partial };
    for (const listener of this.listeners) listener(this.view);
  }

  /** Serialize mutations: no overlapping requests from one studio. */
  private run<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(async () => {
      this.patch({ busy: true, banner: null });
      try {
        return await task();
      } finally {
        this.patch({ busy: false });
      }
    });
    this.queue = next.catch(() => undefined);
    return next as Promise<T>;
  }

  private fail(err: unknown): never {
    const message = err instanceof Error ? err.message : String(err);
    this.patch({ banner: message });
    throw err;
  }

  private async adoptSnapshot(snapshot: SnapshotPayload): Promise<void> {
    const selected =
      this.view.selected !== null && this.view.selected < snapshot.placed_blocks.length
        ? this.view.selected
        : null;
    this.patch({
      snapshot,
      selected,
      ghost: null,
      notice: snapshot.placed_blocks.length === 0 ? "production is empty" : null,
    });
    await this.refreshChoices();
  }

  async refreshChoices(): Promise<void> {
    const { session, snapshot } = this.view;
    if (!session || !snapshot) {
      this.patch({ choices: [] });
      return;
    }
    const payload = await this.api.getChoices(session);
    if (payload.hash !== snapshot.hash) {
      // stale view: re-sync from the authoritative session state
      const fresh = await this.api.getSession(session);
      this.patch({ snapshot: fresh, grammar: fresh.grammar, choices: [] });
      const again = await this.api.getChoices(session);
      this.patch({ choices: again.choices });
      return;
    }
    this.patch({ choices: payload.choices });
  }

  openSessionFromGrammar(grammar: GrammarDoc, opts: { initial?: number; seed?: number } = {}) {
    return this.run(async () => {
      try {
        const session = await this.api.createSession(grammar, opts);
        this.patch({
          session: session.id,
          grammar,
          selected: 0,
          ghost: null,
          choices: [],
        });
        await this.adoptSnapshot(session);
        return session;
      } catch (err) {
        this.fail(err);
      }
    });
  }

  /** Corpus model -> infer -> induce -> session, all server-side. */
  openSessionFromCorpus(
    name: string,
    opts: { spec?: "rect" | "2d" | "3d"; alpha?: number; seed?: number } = {},
  ) {
    return this.run(async () => {
      try {
        const model = await this.api.getCorpusModel(name);
        const shapeSet = await this.api.infer({
          model,
          spec: opts.spec ?? "rect",
          alpha: opts.alpha ?? 1.0,
        });
        const grammar = await this.api.induce([shapeSet]);
        const session = await this.api.createSession(grammar, { seed: opts.seed ?? 0 });
        this.patch({
          session: session.id,
          grammar,
          selected: 0,
          ghost: null,
          choices: [],
        });
        await this.adoptSnapshot(session);
        return session;
      } catch (err) {
        this.fail(err);
      }
    });
  }

  select(index: number | null): void {
    const max = this.view.snapshot?.placed_blocks.length ?? 0;
    this.patch({
      selected: index !== null && index >= 0 && index < max ? index : null,
      ghost: null,
    });
  }

  /** Choices applicable to the selected placed shape. */
  choicesForSelection(): ChoiceDoc[] {
    const { selected, choices } = this.view;
    if (selected === null) return [];
    return choices.filter((c) => c.target === selected);
  }

  hoverChoice(choice: ChoiceDoc | null): void {
    this.patch({ ghost: choice });
  }

  setColorMode(mode: ColorMode): void {
    this.patch({ colorMode: mode });
  }

  applyChoice(index: number) {
    return this.run(async () => {
      const { session } = this.view;
      if (!session) return;
      try {
        const payload = await this.api.applyChoice(session, index);
        await this.adoptSnapshot(payload);
        return payload;
      } catch (err) {
        this.fail(err);
      }
    });
  }

  undo() {
    return this.run(async () => {
      const { session } = this.view;
      if (!session) return;
      try {
        const payload = await this.api.undo(session);
        await this.adoptSnapshot(payload);
        return payload;
      } catch (err) {
        this.fail(err);
      }
    });
  }

  enclosure() {
    return this.run(async () => {
      const { session } = this.view;
      if (!session) return;
      try {
        const payload = await this.api.enclosure(session);
        await this.adoptSnapshot(payload);
        this.patch({
          notice:
            payload.removed > 0
              ? `enclosure removed ${payload.removed} shape${payload.removed === 1 ? "" : "s"}`
              : "enclosure removed nothing",
        });
        return payload;
      } catch (err) {
        this.fail(err);
      }
    });
  }

  exportModel(): Promise<ModelDoc> {
    return this.run(async () => {
      const { session } = this.view;
      if (!session) throw new Error("no session");
      try {
        return await this.api.getModel(session);
      } catch (err) {
        this.fail(err);
      }
    });
  }

  exportGrammar(): Promise<GrammarDoc> {
    return this.run(async () => {
      const { session } = this.view;
      if (!session) throw new Error("no session");
      try {
        const fresh = await this.api.getSession(session);
        return fresh.grammar;
      } catch (err) {
        this.fail(err);
      }
    });
  }
}
