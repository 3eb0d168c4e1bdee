/** Thin typed client for the explorer API with latest-wins cancellation:
 * a new filter/representatives request aborts any one still in flight, so a
 * slider burst settles on the final position. */

import type {
  FilterResult,
  FrontDoc,
  ProfilesResponse,
  RepresentativesResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function readJson(resp: Response): Promise<unknown> {
  const body = await resp.json().catch(() => null);
  if (!resp.ok && resp.status !== 409) {
    throw new ApiError(resp.status, `HTTP ${resp.status}: ${JSON.stringify(body)}`);
  }
  return body;
}

export class ApiClient {
  private inflight: Map<string, AbortController> = new Map();

  constructor(readonly base: string = "") {}

  private takeSlot(kind: string): AbortSignal {
    this.inflight.get(kind)?.abort();
    const controller = new AbortController();
    this.inflight.set(kind, controller);
    return controller.signal;
  }

  async getFront(): Promise<FrontDoc> {
    const resp = await fetch(`${this.base}/front`);
    return (await readJson(resp)) as FrontDoc;
  }

  async getProfiles(): Promise<ProfilesResponse> {
    const resp = await fetch(`${this.base}/profiles`);
    return (await readJson(resp)) as ProfilesResponse;
  }

  /** 409 (empty region) resolves to the status body, not an error. */
  async filter(p_g: number, p_r: number): Promise<FilterResult> {
    const resp = await fetch(`${this.base}/filter`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ p_g, p_r }),
      signal: this.takeSlot("filter"),
    });
    return (await readJson(resp)) as FilterResult;
  }

  async representatives(p_g: number, p_r: number): Promise<RepresentativesResult> {
    const params = new URLSearchParams({ p_g: String(p_g), p_r: String(p_r) });
    const resp = await fetch(`${this.base}/representatives?${params}`, {
      signal: this.takeSlot("representatives"),
    });
    return (await readJson(resp)) as RepresentativesResult;
  }
}
