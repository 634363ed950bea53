/* tslint:disable */
/* eslint-disable */

/**
 * Survival, forward hazard and par spread of one `(a, b, c)` curve.
 */
export class CurveProfile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly hazard: Float64Array;
    /**
     * Par CDS spread, bp.
     */
    readonly spread_bp: Float64Array;
    readonly survival: Float64Array;
    readonly tenors: Float64Array;
}

/**
 * Two-bond recovery sweep.
 */
export class RecoverySweep {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Recovery where one flat hazard prices both bonds, NaN when none in range.
     */
    readonly crossover: number;
    readonly crossover_hazard: number;
    readonly hazard: Float64Array;
    readonly recovery: Float64Array;
    readonly residual_first: Float64Array;
    readonly residual_second: Float64Array;
}

export function curve_profile(a: number, b: number, c: number, rate: number, recovery: number, max_tenor: number): CurveProfile;

/**
 * Par spreads by rating, row-major `ratings x tenors`, bp.
 */
export function grid_spreads(anchors: Float64Array, c: number, rate: number, tenors: Float64Array, floor: number): Float64Array;

export function rating_symbols(): string[];

export function recovery_sweep(first: Float64Array, second: Float64Array, rate: number): RecoverySweep;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curveprofile_free: (a: number, b: number) => void;
    readonly __wbg_recoverysweep_free: (a: number, b: number) => void;
    readonly curve_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly curveprofile_hazard: (a: number) => [number, number];
    readonly curveprofile_spread_bp: (a: number) => [number, number];
    readonly curveprofile_survival: (a: number) => [number, number];
    readonly curveprofile_tenors: (a: number) => [number, number];
    readonly grid_spreads: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly rating_symbols: () => [number, number];
    readonly recovery_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly recoverysweep_crossover: (a: number) => number;
    readonly recoverysweep_crossover_hazard: (a: number) => number;
    readonly recoverysweep_hazard: (a: number) => [number, number];
    readonly recoverysweep_recovery: (a: number) => [number, number];
    readonly recoverysweep_residual_first: (a: number) => [number, number];
    readonly recoverysweep_residual_second: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
