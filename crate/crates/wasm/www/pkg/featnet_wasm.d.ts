/* tslint:disable */
/* eslint-disable */

export class Explorer {
    free(): void;
    [Symbol.dispose](): void;
    chart_json(u: number, v: number): string;
    /**
     * Graph JSON; pass `undefined` for the swept threshold.
     */
    graph_json(alpha?: number | null): string;
    constructor(csv: string, discrete_threshold: number, k: number, seed: number);
    sweep_json(): string;
}

export function gaussian_mi_demo(rho: number, n: number, k: number, seed: number): string;

/**
 * Sample table bundled into the page.
 */
export function sample_csv(records: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_explorer_free: (a: number, b: number) => void;
    readonly explorer_chart_json: (a: number, b: number, c: number) => [number, number, number, number];
    readonly explorer_graph_json: (a: number, b: number, c: number) => [number, number, number, number];
    readonly explorer_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly explorer_sweep_json: (a: number) => [number, number, number, number];
    readonly gaussian_mi_demo: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly sample_csv: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
