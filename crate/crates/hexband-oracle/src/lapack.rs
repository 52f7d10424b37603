//! Thin bindings to the two LAPACKE routines the oracle needs.
//!
//! `Complex64` is `#[repr(C)]` with `(re, im)` layout, matching
//! `lapack_complex_double`, so values pass through without conversion. All
//! matrices are handed over row-major; LAPACKE transposes internally.

use hexband::Error;
use num_complex::Complex64;

const LAPACK_ROW_MAJOR: i32 = 101;

/// Reference LAPACK is commonly built with `-frecursive`, which places O(n²)
/// scratch on the stack; run every call on a worker thread with room for it.
fn with_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(64 * 1024 * 1024)
            .spawn_scoped(scope, f)
            .expect("failed to spawn LAPACK worker thread")
            .join()
            .expect("LAPACK worker thread panicked")
    })
}

extern "C" {
    fn LAPACKE_zgesv(
        matrix_layout: i32,
        n: i32,
        nrhs: i32,
        a: *mut Complex64,
        lda: i32,
        ipiv: *mut i32,
        b: *mut Complex64,
        ldb: i32,
    ) -> i32;

    fn LAPACKE_zgeev(
        matrix_layout: i32,
        jobvl: std::os::raw::c_char,
        jobvr: std::os::raw::c_char,
        n: i32,
        a: *mut Complex64,
        lda: i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: i32,
        vr: *mut Complex64,
        ldvr: i32,
    ) -> i32;
}

/// Solve `A·X = B` in place: on return `b` holds `X`. Both matrices are
/// dense row-major `n × n`.
pub fn solve(a: &mut [Complex64], b: &mut [Complex64], n: usize) -> Result<(), Error> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n * n);
    let ni = n as i32;
    let mut ipiv = vec![0i32; n];
    let info = with_big_stack(|| unsafe {
        LAPACKE_zgesv(
            LAPACK_ROW_MAJOR,
            ni,
            ni,
            a.as_mut_ptr(),
            ni,
            ipiv.as_mut_ptr(),
            b.as_mut_ptr(),
            ni,
        )
    });
    if info != 0 {
        return Err(Error::Numerical(format!("LAPACKE_zgesv failed: info = {info}")));
    }
    Ok(())
}

/// Eigenvalues of a dense row-major `n × n` matrix; the input is destroyed.
pub fn eigenvalues(a: &mut [Complex64], n: usize) -> Result<Vec<Complex64>, Error> {
    assert_eq!(a.len(), n * n);
    let ni = n as i32;
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    // eigenvectors not requested; the row-major wrapper still validates the
    // leading dimensions against n, so pass n with an untouched dummy buffer
    let mut dummy = [Complex64::new(0.0, 0.0); 1];
    let info = with_big_stack(|| unsafe {
        LAPACKE_zgeev(
            LAPACK_ROW_MAJOR,
            b'N' as std::os::raw::c_char,
            b'N' as std::os::raw::c_char,
            ni,
            a.as_mut_ptr(),
            ni,
            w.as_mut_ptr(),
            dummy.as_mut_ptr(),
            ni,
            dummy.as_mut_ptr(),
            ni,
        )
    });
    if info != 0 {
        return Err(Error::Numerical(format!("LAPACKE_zgeev failed: info = {info}")));
    }
    Ok(w)
}
