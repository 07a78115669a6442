/** View state shared across panels and serialized into the URL fragment so a
 * view (including the test seed) can be restored from a link. */

export type ColorMode = "class" | "group";

export interface ViewState {
  sessionId: string;
  colorMode: ColorMode;
  showMedoidTree: boolean;
  showPath: boolean;
  showMstEdges: boolean;
  showContours: boolean;
  pcaDims: number;
  degree: number;
  bandwidth: number | null;
  seed: number;
  /** Current selection, reissued on restore. */
  endpoints: [string, string] | null;
}

export const DEFAULT_STATE: Omit<ViewState, "sessionId"> = {
  colorMode: "class",
  showMedoidTree: false,
  showPath: true,
  showMstEdges: false,
  showContours: false,
  pcaDims: 10,
  degree: 2,
  bandwidth: null,
  seed: 0,
  endpoints: null,
};

type FlagKey = "showMedoidTree" | "showPath" | "showMstEdges" | "showContours";

const FLAGS: FlagKey[] = ["showMedoidTree", "showPath", "showMstEdges", "showContours"];

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("s", state.sessionId);
  params.set("c", state.colorMode);
  params.set("f", FLAGS.map((k) => (state[k] ? "1" : "0")).join(""));
  params.set("d", String(state.pcaDims));
  params.set("g", String(state.degree));
  if (state.bandwidth !== null) params.set("h", String(state.bandwidth));
  params.set("r", String(state.seed));
  if (state.endpoints) params.set("e", state.endpoints.join("~"));
  return params.toString();
}

export function decodeState(fragment: string): ViewState | null {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const sessionId = params.get("s");
  if (!sessionId) return null;
  const state: ViewState = { sessionId, ...DEFAULT_STATE };
  const mode = params.get("c");
  if (mode === "class" || mode === "group") state.colorMode = mode;
  const flags = params.get("f") ?? "";
  FLAGS.forEach((key, i) => {
    if (flags[i] === "0" || flags[i] === "1") {
      (state as Record<string, unknown>)[key] = flags[i] === "1";
    }
  });
  const dims = Number(params.get("d"));
  if (Number.isFinite(dims) && dims >= 2) state.pcaDims = dims;
  const degree = Number(params.get("g"));
  if (Number.isFinite(degree) && degree >= 1) state.degree = degree;
  if (params.has("h")) {
    const bandwidth = Number(params.get("h"));
    if (Number.isFinite(bandwidth) && bandwidth > 0) state.bandwidth = bandwidth;
  }
  const seed = Number(params.get("r"));
  if (Number.isInteger(seed)) state.seed = seed;
  const endpoints = params.get("e");
  if (endpoints) {
    const parts = endpoints.split("~");
    if (parts.length === 2) state.endpoints = [parts[0], parts[1]];
  }
  return state;
}

/** Invoke `fn` once no further call arrives within `ms` milliseconds. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
  timers: { setTimeout: typeof setTimeout; clearTimeout: typeof clearTimeout } = globalThis
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) timers.clearTimeout(handle);
    handle = timers.setTimeout(() => {
      handle = null;
      fn(...args);
    }, ms);
  };
}
