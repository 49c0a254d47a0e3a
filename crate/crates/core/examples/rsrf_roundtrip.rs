//! Binary RSRF matrices: write, read back, and inspect the header.

use repsurf::io::{read_rsrf, write_rsrf, RsrfMatrix, HEADER_LEN};

fn main() -> repsurf::Result<()> {
    let rows = vec![vec![0.1, 0.2, 0.3, 1.0, 0.0, 0.0, 0.5]; 4];
    let m = RsrfMatrix::from_rows(7, &rows)?;
    let path = std::env::temp_dir().join("repsurf_example.rsrf");
    write_rsrf(&path, &m)?;

    let bytes = std::fs::read(&path)?;
    println!("{} bytes, header {:?}", bytes.len(), &bytes[..HEADER_LEN]);
    let back = read_rsrf(&path)?;
    assert_eq!(back.encode(), bytes);
    println!("{} x {}, first row {:?}", back.rows(), back.channels(), back.row(0));

    let mut broken = bytes.clone();
    broken[3] = b'X';
    println!("corrupted: {}", RsrfMatrix::decode(&broken).unwrap_err());
    std::fs::remove_file(path)?;
    Ok(())
}
