/** Client-side session state with optimistic toggles and version discipline.
 *
 * The store never computes mechanics: every displayed number comes from a
 * server response. Mutations are serialized (at most one in flight), stale
 * evaluation responses are discarded by version check, and the displayed
 * version never decreases.
 */
import type { Address, EvaluateResponse, JointReport } from "./types.js";

export type AddressKey = string;

export function keyOf(addr: Address): AddressKey {
  return `${addr[0]},${addr[1]}`;
}

export interface StoreState {
  version: number;
  selected: Set<AddressKey>;
  report: JointReport | null;
  localization: number | null;
  pendingMutation: boolean;
}

export class StudioStore {
  state: StoreState = {
    version: 0,
    selected: new Set(),
    report: null,
    localization: null,
    pendingMutation: false,
  };
  private listeners: (() => void)[] = [];

  subscribe(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  addresses(): Address[] {
    return [...this.state.selected]
      .map((k) => k.split(",").map(Number) as Address)
      .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  }

  /** Canonical portable pattern document: label, spec, sorted address list. */
  exportPattern(label = "studio"): string {
    return JSON.stringify(
      { label, spec: null, addresses: this.addresses() },
      null,
      2,
    );
  }

  /** Optimistic local toggle; the caller then syncs with the server. */
  toggle(addr: Address): void {
    const k = keyOf(addr);
    if (this.state.selected.has(k)) this.state.selected.delete(k);
    else this.state.selected.add(k);
    this.emit();
  }

  setSelection(addrs: Address[]): void {
    this.state.selected = new Set(addrs.map(keyOf));
    this.emit();
  }

  /** Accept a server version; stale (lower) values are rejected. */
  acceptVersion(version: number): boolean {
    if (version < this.state.version) return false;
    this.state.version = version;
    this.emit();
    return true;
  }

  /** Reconcile an evaluation response; returns false if it was stale. */
  acceptEvaluation(resp: EvaluateResponse): boolean {
    if (resp.version < this.state.version) return false;
    this.state.version = resp.version;
    this.state.report = resp.report;
    this.state.localization = resp.localization;
    this.emit();
    return true;
  }

  beginMutation(): boolean {
    if (this.state.pendingMutation) return false;
    this.state.pendingMutation = true;
    return true;
  }

  endMutation(): void {
    this.state.pendingMutation = false;
  }
}

/** Trailing-edge debounce used for evaluation requests (150 ms). */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } = {
    set: setTimeout,
    clear: clearTimeout,
  },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) timers.clear(handle);
    handle = timers.set(() => {
      handle = null;
      fn(...args);
    }, waitMs);
  };
}
