/* tslint:disable */
/* eslint-disable */

export class FlipSeries {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * NaN outside circular polarization, where no closed form exists.
     */
    readonly analytic: Float64Array;
    readonly numeric: Float64Array;
    readonly t: Float64Array;
}

export class OrbitPath {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly gammaZ: number;
    readonly x: Float64Array;
    readonly y: Float64Array;
    readonly z: Float64Array;
}

export class ResonanceCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly analytic: Float64Array;
    /**
     * NaN for g < 1, where there is no resonance.
     */
    readonly etaStar: number;
    readonly eta: Float64Array;
    readonly numeric: Float64Array;
}

export function flipSeries(eta: number, g: number, epsilon_sq: number, laser_periods: number, steps_per_period: number): FlipSeries;

export function orbitPath(eta: number, epsilon_sq: number, samples: number): OrbitPath;

export function resonanceCurve(g: number, eta_min: number, eta_max: number, points: number, steps_per_period: number): ResonanceCurve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_flipseries_free: (a: number, b: number) => void;
    readonly __wbg_orbitpath_free: (a: number, b: number) => void;
    readonly __wbg_resonancecurve_free: (a: number, b: number) => void;
    readonly flipSeries: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly flipseries_analytic: (a: number) => [number, number];
    readonly flipseries_numeric: (a: number) => [number, number];
    readonly flipseries_t: (a: number) => [number, number];
    readonly orbitPath: (a: number, b: number, c: number) => [number, number, number];
    readonly orbitpath_gammaZ: (a: number) => number;
    readonly orbitpath_x: (a: number) => [number, number];
    readonly orbitpath_y: (a: number) => [number, number];
    readonly orbitpath_z: (a: number) => [number, number];
    readonly resonanceCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly resonancecurve_analytic: (a: number) => [number, number];
    readonly resonancecurve_eta: (a: number) => [number, number];
    readonly resonancecurve_etaStar: (a: number) => number;
    readonly resonancecurve_numeric: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
