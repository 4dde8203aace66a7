/* @ts-self-types="./splatkit_web.d.ts" */

/**
 * SSIM/PSNR of a view pair; `psnr_db` is `Infinity` for identical images.
 */
export class QualityScores {
    static __wrap(ptr) {
        const obj = Object.create(QualityScores.prototype);
        obj.__wbg_ptr = ptr;
        QualityScoresFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        QualityScoresFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_qualityscores_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get offset_distance() {
        const ret = wasm.qualityscores_offset_distance(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get psnr_db() {
        const ret = wasm.qualityscores_psnr_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get ssim() {
        const ret = wasm.qualityscores_ssim(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) QualityScores.prototype[Symbol.dispose] = QualityScores.prototype.free;

/**
 * A splat scene held on the wasm side.
 */
export class Scene {
    static __wrap(ptr) {
        const obj = Object.create(Scene.prototype);
        obj.__wbg_ptr = ptr;
        SceneFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SceneFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_scene_free(ptr, 0);
    }
    /**
     * Loads a trained splat scene from PLY bytes (binary little-endian).
     * @param {Uint8Array} bytes
     * @returns {Scene}
     */
    static from_ply(bytes) {
        const ptr0 = passArray8ToWasm0(bytes, wasm.__wbindgen_malloc);
        const len0 = WASM_VECTOR_LEN;
        const ret = wasm.scene_from_ply(ptr0, len0);
        if (ret[2]) {
            throw takeFromExternrefTable0(ret[1]);
        }
        return Scene.__wrap(ret[0]);
    }
    /**
     * @returns {number}
     */
    get gaussian_count() {
        const ret = wasm.scene_gaussian_count(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Renders the orbit view and a second view displaced sideways along
     * the camera's x axis, and scores the pair. This makes the quality
     * falloff of off-pose rendering directly measurable.
     * @param {number} azimuth_deg
     * @param {number} elevation_deg
     * @param {number} radius
     * @param {number} offset
     * @param {number} width
     * @param {number} height
     * @param {number} focal
     * @returns {QualityScores}
     */
    probe_offset(azimuth_deg, elevation_deg, radius, offset, width, height, focal) {
        const ret = wasm.scene_probe_offset(this.__wbg_ptr, azimuth_deg, elevation_deg, radius, offset, width, height, focal);
        if (ret[2]) {
            throw takeFromExternrefTable0(ret[1]);
        }
        return QualityScores.__wrap(ret[0]);
    }
    /**
     * RGBA render of the offset view itself, for side-by-side display.
     * @param {number} azimuth_deg
     * @param {number} elevation_deg
     * @param {number} radius
     * @param {number} offset
     * @param {number} width
     * @param {number} height
     * @param {number} focal
     * @param {number} background
     * @returns {Uint8Array}
     */
    render_offset(azimuth_deg, elevation_deg, radius, offset, width, height, focal, background) {
        const ret = wasm.scene_render_offset(this.__wbg_ptr, azimuth_deg, elevation_deg, radius, offset, width, height, focal, background);
        if (ret[3]) {
            throw takeFromExternrefTable0(ret[2]);
        }
        var v1 = getArrayU8FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
        return v1;
    }
    /**
     * Renders an orbit view around the origin and returns RGBA bytes for
     * `ImageData`.
     * @param {number} azimuth_deg
     * @param {number} elevation_deg
     * @param {number} radius
     * @param {number} width
     * @param {number} height
     * @param {number} focal
     * @param {number} background
     * @returns {Uint8Array}
     */
    render_orbit(azimuth_deg, elevation_deg, radius, width, height, focal, background) {
        const ret = wasm.scene_render_orbit(this.__wbg_ptr, azimuth_deg, elevation_deg, radius, width, height, focal, background);
        if (ret[3]) {
            throw takeFromExternrefTable0(ret[2]);
        }
        var v1 = getArrayU8FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
        return v1;
    }
    /**
     * @returns {number}
     */
    get sh_degree() {
        const ret = wasm.scene_sh_degree(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Procedural demo scene, deterministic in `seed`.
     * @param {number} count
     * @param {number} sh_degree
     * @param {number} seed
     */
    constructor(count, sh_degree, seed) {
        const ret = wasm.scene_synthetic(count, sh_degree, seed);
        if (ret[2]) {
            throw takeFromExternrefTable0(ret[1]);
        }
        this.__wbg_ptr = ret[0];
        SceneFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
}
if (Symbol.dispose) Scene.prototype[Symbol.dispose] = Scene.prototype.free;

/**
 * USAF-1951 resolution in lp/mm for a group/element reading.
 * @param {number} group
 * @param {number} element
 * @returns {number}
 */
export function usaf_lp_per_mm(group, element) {
    const ret = wasm.usaf_lp_per_mm(group, element);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return ret[0];
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_344f42d3211c4765: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_cast_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./splatkit_web_bg.js": import0,
    };
}

const QualityScoresFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_qualityscores_free(ptr, 1));
const SceneFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_scene_free(ptr, 1));

function getArrayU8FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getUint8ArrayMemory0().subarray(ptr / 1, ptr / 1 + len);
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passArray8ToWasm0(arg, malloc) {
    const ptr = malloc(arg.length * 1, 1) >>> 0;
    getUint8ArrayMemory0().set(arg, ptr / 1);
    WASM_VECTOR_LEN = arg.length;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = module.ok && expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('splatkit_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
