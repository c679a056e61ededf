fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    #[cfg(feature = "generate-header")]
    {
        let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
        cbindgen::generate(&crate_dir)
            .expect("unable to generate bindings")
            .write_to_file(format!("{crate_dir}/include/pun.h"));
    }
}
