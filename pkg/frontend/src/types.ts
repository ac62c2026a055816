// Wire formats of the voxgram HTTP API.

export type Pos = [number, number, number];

export interface TransformDoc {
  rot: number;
  delta: Pos;
}

export interface BlockDoc {
  t: string;
  p: Pos;
}

export interface PlacedDoc {
  shape: number;
  class: number;
  pose: TransformDoc;
}

export interface PlacedBlocksDoc extends PlacedDoc {
  blocks: BlockDoc[];
}

export interface ProductionDoc {
  seed: number;
  initial: number;
  placed: PlacedDoc[];
  history: unknown[][];
}

/** Every state-bearing response carries the production and its hash. */
export interface SnapshotPayload {
  production: ProductionDoc;
  placed_blocks: PlacedBlocksDoc[];
  hash: string;
}

export interface SessionPayload extends SnapshotPayload {
  id: string;
  seed?: number;
}

export interface RuleDoc {
  lhs_class: number;
  lhs_anchor: number;
  rhs: number;
}

export interface ChoiceDoc {
  index: number;
  target: number;
  rule_index: number;
  rule: RuleDoc;
  pose: TransformDoc;
  blocks: BlockDoc[];
  conflict: boolean;
  duplicate: boolean;
}

export interface ChoicesPayload {
  choices: ChoiceDoc[];
  hash: string;
}

export interface ModelDoc {
  name: string;
  blocks: BlockDoc[];
}

export interface EnclosurePayload extends SnapshotPayload {
  removed: number;
}

export interface ApplyPayload extends SnapshotPayload {
  applied: boolean;
}

/** Grammar documents are passed through opaquely; the server owns them. */
export type GrammarDoc = Record<string, unknown>;

export type ColorMode = "shape" | "class" | "type";

export const posKey = (p: Pos): string => `${p[0]},${p[1]},${p[2]}`;
