/**
 * Typed contract for the deliberation service JSON payloads.
 *
 * Schemas are validated at the boundary so a drifting server shows up
 * as a loud parse error, never as quietly wrong numbers in the grid.
 */

import { z } from "zod";

export const AlternativeSchema = z.object({
  id: z.number().int(),
  name: z.string(),
});

export const CriterionSchema = z.object({
  id: z.string(),
  name: z.string(),
  direction: z.enum(["benefit", "cost"]),
  scale_min: z.number(),
  scale_max: z.number(),
});

export const EtableRowSchema = z.object({
  id: z.number().int(),
  name: z.string(),
  ranks: z.record(z.string(), z.number()),
  raw: z.record(z.string(), z.number()),
});

export const AtableRowSchema = z.object({
  id: z.number().int(),
  name: z.string(),
  borda: z.number(),
  simple_median: z.number(),
  averaged_rank_median: z.number(),
});

export const RankingsPayloadSchema = z.object({
  session_id: z.string(),
  table: z.object({
    alternatives: z.array(AlternativeSchema),
    criteria: z.array(CriterionSchema),
    scores: z.array(z.array(z.number())),
    provenance: z.array(z.array(z.string())),
  }),
  weights: z.record(z.string(), z.number()),
  params: z.record(z.string(), z.unknown()),
  selection: z.object({
    rules: z.array(z.string()),
    criteria: z.array(z.string()),
  }),
  etable: z.object({
    rules: z.array(z.string()),
    rows: z.array(EtableRowSchema),
  }),
  atable: z.object({ rows: z.array(AtableRowSchema) }),
  order: z.record(z.string(), z.array(z.number().int())),
});

export const RankDeltaSchema = z.object({
  alternative_id: z.number().int(),
  rule: z.string(),
  before: z.number(),
  after: z.number(),
});

export const EditResponseSchema = RankingsPayloadSchema.extend({
  deltas: z.array(RankDeltaSchema),
});

export const ComparisonSchema = z.object({
  common_ids: z.array(z.number().int()),
  kendall_tau: z.number(),
  spearman_rho: z.number(),
  top_k_overlap: z.record(z.string(), z.number()),
  positions_a: z.record(z.string(), z.number()),
  positions_b: z.record(z.string(), z.number()),
  deltas: z.record(z.string(), z.number()),
});

export const ExportSchema = z.object({
  session_id: z.string(),
  files: z.record(z.string(), z.string()),
  params: z.record(z.string(), z.unknown()),
  weights: z.record(z.string(), z.number()),
});

export const ServiceErrorSchema = z.object({
  code: z.string(),
  message: z.string(),
  locus: z.string().nullable().optional(),
});

export type Alternative = z.infer<typeof AlternativeSchema>;
export type Criterion = z.infer<typeof CriterionSchema>;
export type RankingsPayload = z.infer<typeof RankingsPayloadSchema>;
export type RankDelta = z.infer<typeof RankDeltaSchema>;
export type EditResponse = z.infer<typeof EditResponseSchema>;
export type Comparison = z.infer<typeof ComparisonSchema>;
export type SessionExport = z.infer<typeof ExportSchema>;
export type ServiceError = z.infer<typeof ServiceErrorSchema>;

/** Criterion subset presets mirroring the engine's named selections. */
export type CriteriaSubset = "all" | "qol" | "ma";

export interface CellEdit {
  alternative_id: number;
  criterion_id: string;
  value: number;
}
