/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_qualityscores_free: (a: number, b: number) => void;
export const __wbg_scene_free: (a: number, b: number) => void;
export const qualityscores_offset_distance: (a: number) => number;
export const qualityscores_psnr_db: (a: number) => number;
export const qualityscores_ssim: (a: number) => number;
export const scene_from_ply: (a: number, b: number) => [number, number, number];
export const scene_gaussian_count: (a: number) => number;
export const scene_probe_offset: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const scene_render_offset: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
export const scene_render_orbit: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const scene_sh_degree: (a: number) => number;
export const scene_synthetic: (a: number, b: number, c: number) => [number, number, number];
export const usaf_lp_per_mm: (a: number, b: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
