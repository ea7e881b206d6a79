/** Hand-written canned payloads matching the service contract. */

import { EditResponse, RankingsPayload } from "../src/types.js";

export function cannedPayload(): RankingsPayload {
  return {
    session_id: "abc123",
    table: {
      alternatives: [
        { id: 0, name: "first option" },
        { id: 1, name: "second option" },
        { id: 2, name: "third option" },
      ],
      criteria: [
        { id: "c1", name: "criterion one", direction: "benefit", scale_min: 0, scale_max: 5 },
        { id: "c2", name: "criterion two", direction: "benefit", scale_min: 0, scale_max: 5 },
      ],
      scores: [
        [1.0, 4.0],
        [3.0, 3.0],
        [2.0, 2.0],
      ],
      provenance: [
        ["file", "file"],
        ["file", "manual_edit"],
        ["file", "file"],
      ],
    },
    weights: { c1: 1.0, c2: 3.0 },
    params: { hurwicz_alpha: 0.5 },
    selection: { rules: ["maximin", "topsis"], criteria: ["c1", "c2"] },
    etable: {
      rules: ["maximin", "topsis"],
      rows: [
        { id: 0, name: "first option", ranks: { maximin: 1.0, topsis: 2.0 }, raw: { maximin: 1.0, topsis: 0.55 } },
        { id: 1, name: "second option", ranks: { maximin: 3.0, topsis: 3.0 }, raw: { maximin: 3.0, topsis: 0.8 } },
        { id: 2, name: "third option", ranks: { maximin: 2.0, topsis: 1.0 }, raw: { maximin: 2.0, topsis: 0.2 } },
      ],
    },
    atable: {
      rows: [
        { id: 1, name: "second option", borda: 6.0, simple_median: 3.0, averaged_rank_median: 3.0 },
        { id: 0, name: "first option", borda: 3.0, simple_median: 1.5, averaged_rank_median: 1.5 },
        { id: 2, name: "third option", borda: 3.0, simple_median: 1.5, averaged_rank_median: 1.5 },
      ],
    },
    order: {
      maximin: [1, 2, 0],
      topsis: [1, 0, 2],
      aggregate: [1, 0, 2],
    },
  };
}

export function cannedEditResponse(): EditResponse {
  return {
    ...cannedPayload(),
    deltas: [
      { alternative_id: 0, rule: "topsis", before: 1.0, after: 2.0 },
      { alternative_id: 2, rule: "topsis", before: 2.0, after: 1.0 },
    ],
  };
}
