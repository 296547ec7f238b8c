/* tslint:disable */
/* eslint-disable */

/**
 * A patch-pair simulation stepped from the page.
 */
export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    energy(): number;
    impulse_p(): number;
    impulse_z(): number;
    is_empty(): boolean;
    len(): number;
    /**
     * Unit-strength patch of the given radius centred at `(r0, z0)`, grid
     * spacing `h` and blob radius `2h`.
     */
    constructor(r0: number, z0: number, radius: number, h: number);
    /**
     * `[r, z, ξ₀]` per particle.
     */
    particles(): Float64Array;
    step(dt: number, steps: number): void;
    time(): number;
}

export function dyson_trajectory(gamma: number, r0: number, z0: number, a0: number, dt: number, t_max: number, shrinking: boolean): Float64Array;

export function kernel_curves(s_min: number, s_max: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly dyson_trajectory: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly kernel_curves: (a: number, b: number, c: number) => [number, number, number, number];
    readonly simulation_energy: (a: number) => number;
    readonly simulation_impulse_p: (a: number) => number;
    readonly simulation_impulse_z: (a: number) => number;
    readonly simulation_is_empty: (a: number) => number;
    readonly simulation_len: (a: number) => number;
    readonly simulation_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly simulation_particles: (a: number) => [number, number];
    readonly simulation_step: (a: number, b: number, c: number) => [number, number];
    readonly simulation_time: (a: number) => number;
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
