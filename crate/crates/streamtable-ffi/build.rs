fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        cpp_compat: true,
        include_guard: Some("STREAMTABLE_H".to_string()),
        documentation: true,
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen header generation")
        .write_to_file(std::path::Path::new(&crate_dir).join("include/streamtable.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
}
