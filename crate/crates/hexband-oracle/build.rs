fn main() {
    // dense complex solves and eigenvalues come from the system LAPACKE
    println!("cargo:rustc-link-lib=lapacke");
    println!("cargo:rustc-link-lib=lapack");
    println!("cargo:rustc-link-lib=blas");
}
