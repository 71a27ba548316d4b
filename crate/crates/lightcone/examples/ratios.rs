use lightcone::regularization::{default_basic_ratios, RegularizationModel};

fn main() {
    for m in [RegularizationModel::Exponential, RegularizationModel::HardCutoff] {
        println!("{:?} {:?}", m, default_basic_ratios(m).unwrap());
    }
}
