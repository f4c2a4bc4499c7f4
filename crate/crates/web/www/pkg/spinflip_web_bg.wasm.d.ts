/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_flipseries_free: (a: number, b: number) => void;
export const __wbg_orbitpath_free: (a: number, b: number) => void;
export const __wbg_resonancecurve_free: (a: number, b: number) => void;
export const flipSeries: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const flipseries_analytic: (a: number) => [number, number];
export const flipseries_numeric: (a: number) => [number, number];
export const flipseries_t: (a: number) => [number, number];
export const orbitPath: (a: number, b: number, c: number) => [number, number, number];
export const orbitpath_gammaZ: (a: number) => number;
export const orbitpath_x: (a: number) => [number, number];
export const orbitpath_y: (a: number) => [number, number];
export const orbitpath_z: (a: number) => [number, number];
export const resonanceCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const resonancecurve_analytic: (a: number) => [number, number];
export const resonancecurve_eta: (a: number) => [number, number];
export const resonancecurve_etaStar: (a: number) => number;
export const resonancecurve_numeric: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
