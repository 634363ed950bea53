/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curveprofile_free: (a: number, b: number) => void;
export const __wbg_recoverysweep_free: (a: number, b: number) => void;
export const curve_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const curveprofile_hazard: (a: number) => [number, number];
export const curveprofile_spread_bp: (a: number) => [number, number];
export const curveprofile_survival: (a: number) => [number, number];
export const curveprofile_tenors: (a: number) => [number, number];
export const grid_spreads: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const rating_symbols: () => [number, number];
export const recovery_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const recoverysweep_crossover: (a: number) => number;
export const recoverysweep_crossover_hazard: (a: number) => number;
export const recoverysweep_hazard: (a: number) => [number, number];
export const recoverysweep_recovery: (a: number) => [number, number];
export const recoverysweep_residual_first: (a: number) => [number, number];
export const recoverysweep_residual_second: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
