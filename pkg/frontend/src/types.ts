/** Wire types of the front-explorer HTTP API. */

export interface FrontEntry {
  weights: number[];
  risk: number;
  ret: number;
  carbon: number;
  box: number[];
}

export interface FrontDoc {
  schema_version: string;
  instance_digest: string;
  asset_ids: string[];
  bounds: { lower: number[]; upper: number[] };
  grid: { f_min: number[]; f_max: number[]; eps: number[]; n_box: number };
  entries: FrontEntry[];
  run: Record<string, unknown>;
}

export interface ProfilesResponse {
  green: Record<string, number>;
  risk: Record<string, number>;
  resolved: { green: Record<string, number>; risk: Record<string, number> };
}

export interface Thresholds {
  p_g: number;
  p_r: number;
}

export interface FilterOk {
  status: "ok";
  thresholds: Thresholds;
  entry_ids: number[];
}

export interface EmptyRegion {
  status: "empty_region";
  thresholds: Thresholds;
  detail?: string;
}

export type FilterResult = FilterOk | EmptyRegion;

export interface ApiEntry extends FrontEntry {
  id: number;
}

export interface RepresentativesOk {
  status: "ok";
  thresholds: Thresholds;
  representatives: {
    opt: ApiEntry;
    min_var: ApiEntry;
    min_emi: ApiEntry;
    max_ret: ApiEntry;
  };
}

export type RepresentativesResult = RepresentativesOk | EmptyRegion;

export const REP_ROLES = ["opt", "min_var", "min_emi", "max_ret"] as const;
export type RepRole = (typeof REP_ROLES)[number];

export const REP_LABELS: Record<RepRole, string> = {
  opt: "opt",
  min_var: "min var",
  min_emi: "min emi",
  max_ret: "max ret",
};
