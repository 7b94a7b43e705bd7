//! Running a script through the interpreter, as the `freebal` binary does.

use freebal::cli::Session;

const SCRIPT: &str = "\
wset F { x: 2, y: 1 }
let a : F = max(x, y)
norm F a
eq F a max(y, x)
eval F a * 2 AT x=-1.5, y=0.25
hom h : F -> rk 2 { x: 1 -1, y: 0 1 }
apply h a
atoms 2
norm F a + q
";

fn main() {
    let outcome = Session::default().run_script(SCRIPT);
    print!("{}", outcome.output);
    println!("exit status {}", outcome.status);
}
