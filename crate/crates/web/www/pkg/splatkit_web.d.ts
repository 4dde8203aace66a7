/* tslint:disable */
/* eslint-disable */

/**
 * SSIM/PSNR of a view pair; `psnr_db` is `Infinity` for identical images.
 */
export class QualityScores {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly offset_distance: number;
    readonly psnr_db: number;
    readonly ssim: number;
}

/**
 * A splat scene held on the wasm side.
 */
export class Scene {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Loads a trained splat scene from PLY bytes (binary little-endian).
     */
    static from_ply(bytes: Uint8Array): Scene;
    /**
     * Renders the orbit view and a second view displaced sideways along
     * the camera's x axis, and scores the pair. This makes the quality
     * falloff of off-pose rendering directly measurable.
     */
    probe_offset(azimuth_deg: number, elevation_deg: number, radius: number, offset: number, width: number, height: number, focal: number): QualityScores;
    /**
     * RGBA render of the offset view itself, for side-by-side display.
     */
    render_offset(azimuth_deg: number, elevation_deg: number, radius: number, offset: number, width: number, height: number, focal: number, background: number): Uint8Array;
    /**
     * Renders an orbit view around the origin and returns RGBA bytes for
     * `ImageData`.
     */
    render_orbit(azimuth_deg: number, elevation_deg: number, radius: number, width: number, height: number, focal: number, background: number): Uint8Array;
    /**
     * Procedural demo scene, deterministic in `seed`.
     */
    constructor(count: number, sh_degree: number, seed: number);
    readonly gaussian_count: number;
    readonly sh_degree: number;
}

/**
 * USAF-1951 resolution in lp/mm for a group/element reading.
 */
export function usaf_lp_per_mm(group: number, element: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_qualityscores_free: (a: number, b: number) => void;
    readonly __wbg_scene_free: (a: number, b: number) => void;
    readonly qualityscores_offset_distance: (a: number) => number;
    readonly qualityscores_psnr_db: (a: number) => number;
    readonly qualityscores_ssim: (a: number) => number;
    readonly scene_from_ply: (a: number, b: number) => [number, number, number];
    readonly scene_gaussian_count: (a: number) => number;
    readonly scene_probe_offset: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly scene_render_offset: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly scene_render_orbit: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly scene_sh_degree: (a: number) => number;
    readonly scene_synthetic: (a: number, b: number, c: number) => [number, number, number];
    readonly usaf_lp_per_mm: (a: number, b: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
