//! NIfTI-1 label-volume reader.
//!
//! Reads single-file (`n+1`) NIfTI-1 volumes, raw or gzip-compressed, in
//! either byte order. Header-dual (`ni1` + `.img`) files, NIfTI-2, and
//! non-label datatypes are rejected. Only 3D volumes are accepted; trailing
//! singleton dimensions are squeezed.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use byteorder::{BigEndian, ByteOrder, LittleEndian};
use flate2::read::MultiGzDecoder;

use crate::geom::Affine;
use crate::label::VertebraLabel;
use crate::volume::LabelVolume;
use crate::{Error, Result};

const HEADER_SIZE: usize = 348;

mod offset {
    pub const SIZEOF_HDR: usize = 0;
    pub const DIM: usize = 40;
    pub const DATATYPE: usize = 70;
    pub const PIXDIM: usize = 76;
    pub const VOX_OFFSET: usize = 108;
    pub const SCL_SLOPE: usize = 112;
    pub const SCL_INTER: usize = 116;
    pub const QFORM_CODE: usize = 252;
    pub const SFORM_CODE: usize = 254;
    pub const QUATERN_B: usize = 256;
    pub const QUATERN_C: usize = 260;
    pub const QUATERN_D: usize = 264;
    pub const QOFFSET_X: usize = 268;
    pub const SROW_X: usize = 280;
    pub const SROW_Y: usize = 296;
    pub const SROW_Z: usize = 312;
    pub const MAGIC: usize = 344;
}

/// Largest allowed |value - round(value)| when converting scaled voxel
/// values to integer label codes.
pub const ROUNDING_TOLERANCE: f64 = 1e-6;

/// Loads a NIfTI-1 label volume from `path`, decompressing transparently
/// when the file starts with the gzip magic bytes.
pub fn load_label_volume(path: impl AsRef<Path>) -> Result<LabelVolume> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut raw = Vec::new();
    file.read_to_end(&mut raw).map_err(|e| Error::io(path, e))?;
    let bytes = if raw.len() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b {
        let mut out = Vec::new();
        MultiGzDecoder::new(&raw[..])
            .read_to_end(&mut out)
            .map_err(|e| Error::io(path, e))?;
        out
    } else {
        raw
    };
    parse_label_volume(&bytes)
}

/// Parses an in-memory (already decompressed) NIfTI-1 byte stream.
pub fn parse_label_volume(bytes: &[u8]) -> Result<LabelVolume> {
    if bytes.len() < HEADER_SIZE {
        return Err(Error::TruncatedData { expected: HEADER_SIZE, found: bytes.len() });
    }

    // sizeof_hdr doubles as the endianness probe: 348 read in the wrong
    // byte order comes out as 1543569408.
    let sizeof_le = LittleEndian::read_i32(&bytes[offset::SIZEOF_HDR..]);
    let sizeof_be = BigEndian::read_i32(&bytes[offset::SIZEOF_HDR..]);
    let big_endian = match (sizeof_le, sizeof_be) {
        (348, _) => false,
        (_, 348) => true,
        _ => return Err(Error::BadHeaderSize { found: sizeof_le }),
    };

    let magic: [u8; 4] = bytes[offset::MAGIC..offset::MAGIC + 4].try_into().unwrap();
    if &magic != b"n+1\0" {
        return Err(Error::BadMagic { magic });
    }

    if big_endian {
        parse_with::<BigEndian>(bytes)
    } else {
        parse_with::<LittleEndian>(bytes)
    }
}

fn parse_with<E: ByteOrder>(bytes: &[u8]) -> Result<LabelVolume> {
    let mut dim = [0i16; 8];
    E::read_i16_into(&bytes[offset::DIM..offset::DIM + 16], &mut dim);
    let mut pixdim = [0f32; 8];
    E::read_f32_into(&bytes[offset::PIXDIM..offset::PIXDIM + 32], &mut pixdim);

    let ndim = dim[0];
    if !(1..=7).contains(&ndim) {
        return Err(Error::NotThreeDimensional { ndim });
    }
    // Squeeze trailing singleton dimensions (e.g. dim[0]=4 with dim[4]=1).
    let mut effective = ndim as usize;
    while effective > 3 && dim[effective] <= 1 {
        effective -= 1;
    }
    if effective != 3 {
        return Err(Error::NotThreeDimensional { ndim });
    }
    for d in &dim[1..=3] {
        if *d <= 0 {
            return Err(Error::invalid(format!("non-positive dimension in {:?}", &dim[1..=3])));
        }
    }
    let dims = [dim[1] as usize, dim[2] as usize, dim[3] as usize];
    let n_voxels = dims[0] * dims[1] * dims[2];

    let datatype = E::read_i16(&bytes[offset::DATATYPE..]);
    let vox_offset = E::read_f32(&bytes[offset::VOX_OFFSET..]) as usize;
    let data_start = vox_offset.max(HEADER_SIZE);
    let scl_slope = E::read_f32(&bytes[offset::SCL_SLOPE..]) as f64;
    let scl_inter = E::read_f32(&bytes[offset::SCL_INTER..]) as f64;

    let spacing = [pixdim[1] as f64, pixdim[2] as f64, pixdim[3] as f64];
    if spacing.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::BadSpacing { spacing });
    }

    let affine = read_affine::<E>(bytes, &pixdim)?;

    let codes = decode_voxels::<E>(&bytes[data_start..], datatype, n_voxels, scl_slope, scl_inter, dims)?;

    LabelVolume::new(dims, spacing, affine, codes)
}

fn read_affine<E: ByteOrder>(bytes: &[u8], pixdim: &[f32; 8]) -> Result<Affine> {
    let sform_code = E::read_i16(&bytes[offset::SFORM_CODE..]);
    let qform_code = E::read_i16(&bytes[offset::QFORM_CODE..]);

    if sform_code > 0 {
        let mut m = [[0.0f64; 4]; 4];
        for (row, off) in [offset::SROW_X, offset::SROW_Y, offset::SROW_Z].iter().enumerate() {
            let mut r = [0f32; 4];
            E::read_f32_into(&bytes[*off..off + 16], &mut r);
            for (col, v) in r.iter().enumerate() {
                m[row][col] = *v as f64;
            }
        }
        m[3][3] = 1.0;
        return Ok(Affine::new(m));
    }

    if qform_code > 0 {
        return Ok(qform_affine::<E>(bytes, pixdim));
    }

    Ok(Affine::from_diagonal_spacing([
        pixdim[1] as f64,
        pixdim[2] as f64,
        pixdim[3] as f64,
    ]))
}

/// NIfTI-1 quaternion-form affine: rotation from (b, c, d) with
/// a = sqrt(1 - b² - c² - d²), columns scaled by pixdim, z flipped by
/// qfac (pixdim[0], 0 treated as +1), offset from qoffset_{x,y,z}.
fn qform_affine<E: ByteOrder>(bytes: &[u8], pixdim: &[f32; 8]) -> Affine {
    let b = E::read_f32(&bytes[offset::QUATERN_B..]) as f64;
    let c = E::read_f32(&bytes[offset::QUATERN_C..]) as f64;
    let d = E::read_f32(&bytes[offset::QUATERN_D..]) as f64;
    let a = (1.0 - b * b - c * c - d * d).max(0.0).sqrt();

    let mut q = [0f32; 3];
    E::read_f32_into(&bytes[offset::QOFFSET_X..offset::QOFFSET_X + 12], &mut q);

    let qfac = if pixdim[0] < 0.0 { -1.0 } else { 1.0 };
    let sx = pixdim[1] as f64;
    let sy = pixdim[2] as f64;
    let sz = pixdim[3] as f64 * qfac;

    let r = [
        [a * a + b * b - c * c - d * d, 2.0 * (b * c - a * d), 2.0 * (b * d + a * c)],
        [2.0 * (b * c + a * d), a * a + c * c - b * b - d * d, 2.0 * (c * d - a * b)],
        [2.0 * (b * d - a * c), 2.0 * (c * d + a * b), a * a + d * d - b * b - c * c],
    ];

    let mut m = [[0.0f64; 4]; 4];
    for row in 0..3 {
        m[row][0] = r[row][0] * sx;
        m[row][1] = r[row][1] * sy;
        m[row][2] = r[row][2] * sz;
        m[row][3] = q[row] as f64;
    }
    m[3][3] = 1.0;
    Affine::new(m)
}

fn decode_voxels<E: ByteOrder>(
    data: &[u8],
    datatype: i16,
    n_voxels: usize,
    scl_slope: f64,
    scl_inter: f64,
    dims: [usize; 3],
) -> Result<Vec<u8>> {
    let elem_size = match datatype {
        2 | 256 => 1,
        4 | 512 => 2,
        8 | 768 | 16 => 4,
        64 => 8,
        other => return Err(Error::UnsupportedDatatype { code: other }),
    };
    let expected = n_voxels * elem_size;
    if data.len() < expected {
        return Err(Error::TruncatedData { expected, found: data.len() });
    }
    let data = &data[..expected];

    // scl_slope == 0 means "no scaling" by convention.
    let scale = |v: f64| if scl_slope == 0.0 { v } else { v * scl_slope + scl_inter };

    let mut codes = Vec::with_capacity(n_voxels);
    let mut push = |i: usize, value: f64| -> Result<()> {
        let scaled = scale(value);
        let rounded = scaled.round();
        let err = (scaled - rounded).abs();
        if err > ROUNDING_TOLERANCE {
            let (x, y, z) = unflatten(i, dims);
            return Err(Error::NonIntegralVoxel { value: scaled, err, x, y, z });
        }
        if rounded < 0.0 || rounded > u8::MAX as f64 || !valid_code_or_background(rounded as i64) {
            let (x, y, z) = unflatten(i, dims);
            return Err(Error::InvalidLabelAt { code: rounded as i64, x, y, z });
        }
        codes.push(rounded as u8);
        Ok(())
    };

    match datatype {
        2 => {
            for (i, b) in data.iter().enumerate() {
                push(i, *b as f64)?;
            }
        }
        256 => {
            for (i, b) in data.iter().enumerate() {
                push(i, *b as i8 as f64)?;
            }
        }
        4 => {
            for i in 0..n_voxels {
                push(i, E::read_i16(&data[i * 2..]) as f64)?;
            }
        }
        512 => {
            for i in 0..n_voxels {
                push(i, E::read_u16(&data[i * 2..]) as f64)?;
            }
        }
        8 => {
            for i in 0..n_voxels {
                push(i, E::read_i32(&data[i * 4..]) as f64)?;
            }
        }
        768 => {
            for i in 0..n_voxels {
                push(i, E::read_u32(&data[i * 4..]) as f64)?;
            }
        }
        16 => {
            for i in 0..n_voxels {
                push(i, E::read_f32(&data[i * 4..]) as f64)?;
            }
        }
        64 => {
            for i in 0..n_voxels {
                push(i, E::read_f64(&data[i * 8..]))?;
            }
        }
        _ => unreachable!("datatype validated above"),
    }
    Ok(codes)
}

fn valid_code_or_background(code: i64) -> bool {
    code == 0 || u8::try_from(code).map(VertebraLabel::is_valid_code).unwrap_or(false)
}

fn unflatten(index: usize, dims: [usize; 3]) -> (usize, usize, usize) {
    let x = index % dims[0];
    let y = (index / dims[0]) % dims[1];
    let z = index / (dims[0] * dims[1]);
    (x, y, z)
}
