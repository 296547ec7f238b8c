/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const dyson_trajectory: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const kernel_curves: (a: number, b: number, c: number) => [number, number, number, number];
export const simulation_energy: (a: number) => number;
export const simulation_impulse_p: (a: number) => number;
export const simulation_impulse_z: (a: number) => number;
export const simulation_is_empty: (a: number) => number;
export const simulation_len: (a: number) => number;
export const simulation_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const simulation_particles: (a: number) => [number, number];
export const simulation_step: (a: number, b: number, c: number) => [number, number];
export const simulation_time: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
