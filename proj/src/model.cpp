#include "mimic/model.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "mimic/errors.hpp"
#include "mimic/nn/activations.hpp"
#include "mimic/rng.hpp"
#include "mimic/text_io.hpp"

namespace mimic {

using nn::Mat;

std::string model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::AttentionKan: return "attention-kan";
        case ModelKind::MlpBlendshape: return "mlp-blendshape";
        case ModelKind::MlpLandmark: return "mlp-landmark";
    }
    return "attention-kan";
}

ModelKind model_kind_from_name(const std::string& s) {
    if (s == "attention-kan") return ModelKind::AttentionKan;
    if (s == "mlp-blendshape") return ModelKind::MlpBlendshape;
    if (s == "mlp-landmark") return ModelKind::MlpLandmark;
    throw ArgumentError("unknown model kind: '" + s + "'");
}

void ModelConfig::validate() const {
    if (d_model < 2 || d_model % 2 != 0)
        throw ArgumentError("d_model must be even and >= 2");
    if (kan_widths[0] != kNumFeatures)
        throw ArgumentError("kan_widths[0] must be 55");
    if (kan_widths[3] != kNumServos)
        throw ArgumentError("kan_widths[3] must be 25");
    if (kan_widths[1] < 1 || kan_widths[2] < 1)
        throw ArgumentError("kan hidden widths must be >= 1");
    if (mlp_hidden < 1) throw ArgumentError("mlp_hidden must be >= 1");
    if (spline_intervals < 3) throw ArgumentError("spline_intervals must be >= 3");
    if (!(spline_lo < spline_hi)) throw ArgumentError("spline domain must be ordered");
}

GradSet Model::make_grad_set() const {
    GradSet g;
    for (const Mat* p : params()) g.emplace_back(p->rows, p->cols);
    return g;
}

std::size_t Model::num_params() const {
    std::size_t n = 0;
    for (const Mat* p : params()) n += p->size();
    return n;
}

namespace {

// ---------------------------------------------------------------------------
// Attention-KAN: scalar features lifted to tokens (value * embedding +
// positional encoding), mixed by self-attention, projected back to scalars,
// then three KAN layers and a logistic output.
// ---------------------------------------------------------------------------

class AttentionKanModel final : public Model {
public:
    explicit AttentionKanModel(const ModelConfig& cfg)
        : cfg_(cfg),
          grid_(cfg.spline_intervals, cfg.spline_lo, cfg.spline_hi),
          pe_(nn::positional_encoding(kNumFeatures, cfg.d_model)),
          emb_(kNumFeatures, cfg.d_model),
          attn_(cfg.d_model),
          proj_(1, cfg.d_model),
          kan1_(cfg.kan_widths[0], cfg.kan_widths[1], grid_),
          kan2_(cfg.kan_widths[1], cfg.kan_widths[2], grid_),
          kan3_(cfg.kan_widths[2], cfg.kan_widths[3], grid_) {
        SplitMix64 rng(derive_seed(cfg.seed, seed_tag::kInit));
        emb_ = Mat::gaussian(kNumFeatures, cfg.d_model, 1.0, 0.02, rng);
        attn_.init(rng);
        proj_ = Mat::gaussian(1, cfg.d_model, 1.0 / cfg.d_model, 0.02, rng);
        kan1_.init(rng);
        kan2_.init(rng);
        kan3_.init(rng);
    }

    struct KTape : Tape {
        std::vector<double> input;
        Mat tokens;             // T x d
        nn::AttentionCache attn;
        Mat mixed;              // T x d (attention output or tokens if bypassed)
        std::vector<double> attended;  // T scalars
        nn::KanCache k1, k2, k3;
        std::vector<double> h3;  // pre-logistic
        ServoFrame y;
    };

    const ModelConfig& config() const override { return cfg_; }

    ServoFrame forward(const std::vector<double>& input) const override {
        KTape tape;
        return run_forward(input, tape);
    }

    std::unique_ptr<Tape> make_tape() const override {
        return std::make_unique<KTape>();
    }

    ServoFrame forward_train(const std::vector<double>& input, Tape& tape) const override {
        return run_forward(input, dynamic_cast<KTape&>(tape));
    }

    void backward(const Tape& tape_base, const ServoFrame& grad_output, GradSet& grads,
                  std::vector<double>* grad_input) const override {
        const auto& tape = dynamic_cast<const KTape&>(tape_base);
        if (grad_output.size() != static_cast<std::size_t>(kNumServos))
            throw DimensionError("backward: grad_output must be 25-dimensional");
        if (grads.size() != 14) throw DimensionError("backward: bad grad set size");

        const int T = kNumFeatures, d = cfg_.d_model;

        std::vector<double> dh3(kNumServos);
        for (int q = 0; q < kNumServos; ++q)
            dh3[q] = grad_output[q] * tape.y[q] * (1.0 - tape.y[q]);

        nn::KanGrads g3(kan3_), g2(kan2_), g1(kan1_);
        nn::kan_backward(kan3_, tape.k3, dh3, g3);
        nn::kan_backward(kan2_, tape.k2, g3.x, g2);
        nn::kan_backward(kan1_, tape.k1, g2.x, g1);
        const std::vector<double>& ds = g1.x;  // grad w.r.t. attended scalars

        // token projection
        Mat dmixed(T, d);
        for (int p = 0; p < T; ++p)
            for (int j = 0; j < d; ++j) {
                dmixed(p, j) = ds[p] * proj_(0, j);
                grads[4](0, j) += ds[p] * tape.mixed(p, j);
            }

        Mat dtokens;
        if (cfg_.attention_enabled) {
            nn::AttentionGrads ag(attn_, T);
            nn::attention_backward(attn_, tape.attn, dmixed, ag);
            for (std::size_t i = 0; i < ag.wq.d.size(); ++i) {
                grads[1].d[i] += ag.wq.d[i];
                grads[2].d[i] += ag.wk.d[i];
                grads[3].d[i] += ag.wv.d[i];
            }
            dtokens = std::move(ag.x);
            for (std::size_t i = 0; i < dtokens.d.size(); ++i)
                dtokens.d[i] += dmixed.d[i];  // residual path
        } else {
            dtokens = dmixed;
        }

        // token lift
        for (int p = 0; p < T; ++p)
            for (int j = 0; j < d; ++j)
                grads[0](p, j) += dtokens(p, j) * tape.input[p];
        if (grad_input) {
            grad_input->assign(T, 0.0);
            for (int p = 0; p < T; ++p) {
                double acc = 0.0;
                for (int j = 0; j < d; ++j) acc += dtokens(p, j) * emb_(p, j);
                (*grad_input)[p] = acc;
            }
        }

        accumulate_kan(grads, 5, g1);
        accumulate_kan(grads, 8, g2);
        accumulate_kan(grads, 11, g3);
    }

    std::vector<Mat*> params() override {
        return {&emb_, &attn_.wq, &attn_.wk, &attn_.wv, &proj_,
                &kan1_.w_b, &kan1_.w_s, &kan1_.coef,
                &kan2_.w_b, &kan2_.w_s, &kan2_.coef,
                &kan3_.w_b, &kan3_.w_s, &kan3_.coef};
    }
    std::vector<const Mat*> params() const override {
        return {&emb_, &attn_.wq, &attn_.wk, &attn_.wv, &proj_,
                &kan1_.w_b, &kan1_.w_s, &kan1_.coef,
                &kan2_.w_b, &kan2_.w_s, &kan2_.coef,
                &kan3_.w_b, &kan3_.w_s, &kan3_.coef};
    }
    std::vector<std::string> param_names() const override {
        return {"token_embed", "attn_wq", "attn_wk", "attn_wv", "token_proj",
                "kan1_wb", "kan1_ws", "kan1_coef",
                "kan2_wb", "kan2_ws", "kan2_coef",
                "kan3_wb", "kan3_ws", "kan3_coef"};
    }

private:
    ServoFrame run_forward(const std::vector<double>& input, KTape& tape) const {
        if (input.size() != static_cast<std::size_t>(kNumFeatures))
            throw DimensionError("attention-kan input must have 55 values, got " +
                                 std::to_string(input.size()));
        const int T = kNumFeatures, d = cfg_.d_model;
        tape.input = input;
        tape.tokens = Mat(T, d);
        for (int p = 0; p < T; ++p)
            for (int j = 0; j < d; ++j)
                tape.tokens(p, j) = input[p] * emb_(p, j) + pe_(p, j);

        // Residual mixer: zeroing the attention term leaves identity mixing.
        if (cfg_.attention_enabled) {
            tape.mixed = nn::attention_forward(attn_, tape.tokens, tape.attn);
            for (std::size_t i = 0; i < tape.mixed.d.size(); ++i)
                tape.mixed.d[i] += tape.tokens.d[i];
        } else {
            tape.mixed = tape.tokens;
        }

        tape.attended.assign(T, 0.0);
        for (int p = 0; p < T; ++p) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += tape.mixed(p, j) * proj_(0, j);
            tape.attended[p] = acc;
        }

        std::vector<double> h1 = nn::kan_forward(kan1_, tape.attended, tape.k1);
        std::vector<double> h2 = nn::kan_forward(kan2_, h1, tape.k2);
        tape.h3 = nn::kan_forward(kan3_, h2, tape.k3);

        tape.y.assign(kNumServos, 0.0);
        for (int q = 0; q < kNumServos; ++q) tape.y[q] = nn::logistic(tape.h3[q]);
        return tape.y;
    }

    static void accumulate_kan(GradSet& grads, std::size_t base, const nn::KanGrads& g) {
        for (std::size_t i = 0; i < g.w_b.d.size(); ++i) grads[base].d[i] += g.w_b.d[i];
        for (std::size_t i = 0; i < g.w_s.d.size(); ++i)
            grads[base + 1].d[i] += g.w_s.d[i];
        for (std::size_t i = 0; i < g.coef.d.size(); ++i)
            grads[base + 2].d[i] += g.coef.d[i];
    }

    ModelConfig cfg_;
    nn::SplineGrid grid_;
    Mat pe_;
    Mat emb_;
    nn::AttentionParams attn_;
    Mat proj_;
    nn::KanLayer kan1_, kan2_, kan3_;
};

// ---------------------------------------------------------------------------
// MLP baselines: in -> hidden -> hidden -> 25, silu activations, logistic
// output, same training surface as the primary model.
// ---------------------------------------------------------------------------

class MlpModel final : public Model {
public:
    explicit MlpModel(const ModelConfig& cfg)
        : cfg_(cfg),
          w1_(cfg.mlp_hidden, cfg.input_dim()), b1_(1, cfg.mlp_hidden),
          w2_(cfg.mlp_hidden, cfg.mlp_hidden), b2_(1, cfg.mlp_hidden),
          w3_(kNumServos, cfg.mlp_hidden), b3_(1, kNumServos) {
        SplitMix64 rng(derive_seed(cfg.seed, seed_tag::kInit));
        const double s1 = 1.0 / std::sqrt(static_cast<double>(cfg.input_dim()));
        const double s2 = 1.0 / std::sqrt(static_cast<double>(cfg.mlp_hidden));
        w1_ = Mat::gaussian(cfg.mlp_hidden, cfg.input_dim(), 0.0, s1, rng);
        w2_ = Mat::gaussian(cfg.mlp_hidden, cfg.mlp_hidden, 0.0, s2, rng);
        w3_ = Mat::gaussian(kNumServos, cfg.mlp_hidden, 0.0, s2, rng);
    }

    struct MTape : Tape {
        std::vector<double> input;
        std::vector<double> z1, a1, z2, a2, z3;
        ServoFrame y;
    };

    const ModelConfig& config() const override { return cfg_; }

    ServoFrame forward(const std::vector<double>& input) const override {
        MTape tape;
        return run_forward(input, tape);
    }

    std::unique_ptr<Tape> make_tape() const override {
        return std::make_unique<MTape>();
    }

    ServoFrame forward_train(const std::vector<double>& input, Tape& tape) const override {
        return run_forward(input, dynamic_cast<MTape&>(tape));
    }

    void backward(const Tape& tape_base, const ServoFrame& grad_output, GradSet& grads,
                  std::vector<double>* grad_input) const override {
        const auto& tape = dynamic_cast<const MTape&>(tape_base);
        if (grad_output.size() != static_cast<std::size_t>(kNumServos))
            throw DimensionError("backward: grad_output must be 25-dimensional");
        const int h = cfg_.mlp_hidden, in = cfg_.input_dim();

        std::vector<double> dz3(kNumServos);
        for (int q = 0; q < kNumServos; ++q)
            dz3[q] = grad_output[q] * tape.y[q] * (1.0 - tape.y[q]);

        std::vector<double> da2(h, 0.0);
        for (int q = 0; q < kNumServos; ++q) {
            grads[5](0, q) += dz3[q];
            for (int j = 0; j < h; ++j) {
                grads[4](q, j) += dz3[q] * tape.a2[j];
                da2[j] += dz3[q] * w3_(q, j);
            }
        }
        std::vector<double> dz2(h);
        for (int j = 0; j < h; ++j) dz2[j] = da2[j] * nn::silu_deriv(tape.z2[j]);

        std::vector<double> da1(h, 0.0);
        for (int q = 0; q < h; ++q) {
            grads[3](0, q) += dz2[q];
            for (int j = 0; j < h; ++j) {
                grads[2](q, j) += dz2[q] * tape.a1[j];
                da1[j] += dz2[q] * w2_(q, j);
            }
        }
        std::vector<double> dz1(h);
        for (int j = 0; j < h; ++j) dz1[j] = da1[j] * nn::silu_deriv(tape.z1[j]);

        if (grad_input) grad_input->assign(in, 0.0);
        for (int q = 0; q < h; ++q) {
            grads[1](0, q) += dz1[q];
            for (int j = 0; j < in; ++j) {
                grads[0](q, j) += dz1[q] * tape.input[j];
                if (grad_input) (*grad_input)[j] += dz1[q] * w1_(q, j);
            }
        }
    }

    std::vector<Mat*> params() override {
        return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_};
    }
    std::vector<const Mat*> params() const override {
        return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_};
    }
    std::vector<std::string> param_names() const override {
        return {"mlp_w1", "mlp_b1", "mlp_w2", "mlp_b2", "mlp_w3", "mlp_b3"};
    }

private:
    ServoFrame run_forward(const std::vector<double>& input, MTape& tape) const {
        const int in = cfg_.input_dim(), h = cfg_.mlp_hidden;
        if (input.size() != static_cast<std::size_t>(in))
            throw DimensionError("mlp input must have " + std::to_string(in) +
                                 " values, got " + std::to_string(input.size()));
        tape.input = input;
        tape.z1.assign(h, 0.0);
        for (int q = 0; q < h; ++q) {
            double acc = b1_(0, q);
            for (int j = 0; j < in; ++j) acc += w1_(q, j) * input[j];
            tape.z1[q] = acc;
        }
        tape.a1.resize(h);
        for (int j = 0; j < h; ++j) tape.a1[j] = nn::silu(tape.z1[j]);

        tape.z2.assign(h, 0.0);
        for (int q = 0; q < h; ++q) {
            double acc = b2_(0, q);
            for (int j = 0; j < h; ++j) acc += w2_(q, j) * tape.a1[j];
            tape.z2[q] = acc;
        }
        tape.a2.resize(h);
        for (int j = 0; j < h; ++j) tape.a2[j] = nn::silu(tape.z2[j]);

        tape.z3.assign(kNumServos, 0.0);
        for (int q = 0; q < kNumServos; ++q) {
            double acc = b3_(0, q);
            for (int j = 0; j < h; ++j) acc += w3_(q, j) * tape.a2[j];
            tape.z3[q] = acc;
        }
        tape.y.assign(kNumServos, 0.0);
        for (int q = 0; q < kNumServos; ++q) tape.y[q] = nn::logistic(tape.z3[q]);
        return tape.y;
    }

    ModelConfig cfg_;
    Mat w1_, b1_, w2_, b2_, w3_, b3_;
};

}  // namespace

std::unique_ptr<Model> build_model(const ModelConfig& config) {
    config.validate();
    if (config.kind == ModelKind::AttentionKan)
        return std::make_unique<AttentionKanModel>(config);
    return std::make_unique<MlpModel>(config);
}

ServoFrame model_forward(const Model& model, const FeatureVector& fv) {
    return model.forward(fv.values);
}

std::vector<ServoFrame> forward_batch(const Model& model,
                                      const std::vector<std::vector<double>>& batch) {
    if (batch.empty()) throw ArgumentError("forward_batch: empty batch");
    std::vector<ServoFrame> out;
    out.reserve(batch.size());
    for (const auto& x : batch) out.push_back(model.forward(x));
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kMagic = "MIMIC-CKPT";
constexpr int kVersion = 1;

void append_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t read_u64_le(const std::string& s, std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[off + i])) << (8 * i);
    return v;
}

std::string config_line(const ModelConfig& c) {
    std::ostringstream out;
    out << "config kind=" << model_kind_name(c.kind) << " d_model=" << c.d_model
        << " widths=" << c.kan_widths[0] << "," << c.kan_widths[1] << ","
        << c.kan_widths[2] << "," << c.kan_widths[3] << " mlp_hidden=" << c.mlp_hidden
        << " attention=" << (c.attention_enabled ? 1 : 0)
        << " grid=" << c.spline_intervals << "," << format_double(c.spline_lo) << ","
        << format_double(c.spline_hi) << " seed=" << c.seed;
    return out.str();
}

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& toks,
                                            std::size_t start) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = start; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw FormatError("checkpoint: malformed key=value token '" + toks[i] + "'");
        kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
    }
    return kv;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void save_checkpoint(const Model& model, const TrainMeta& meta, const std::string& path) {
    std::ostringstream head;
    head << kMagic << "\n";
    head << "version " << kVersion << "\n";
    head << config_line(model.config()) << "\n";
    head << "meta epochs=" << meta.epochs_run << " best_epoch=" << meta.best_epoch
         << " final_train_loss=" << format_double(meta.final_train_loss)
         << " best_test_loss=" << format_double(meta.best_test_loss)
         << " data_seed=" << meta.data_seed << " lr=" << format_double(meta.lr)
         << " lambda=" << format_double(meta.lambda) << " batch=" << meta.batch_size
         << "\n";

    const auto names = model.param_names();
    const auto params = model.params();
    head << "sections " << params.size() << "\n";
    std::size_t offset = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        head << names[i] << " " << offset << " " << params[i]->rows << " "
             << params[i]->cols << "\n";
        offset += params[i]->size();
    }
    head << "data " << offset << "\n";

    std::string out = head.str();
    out.reserve(out.size() + offset * 8);
    for (const Mat* p : params) {
        for (double v : p->d) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            append_u64_le(out, bits);
        }
    }
    write_file_atomic(path, out);
}

LoadedModel load_checkpoint(const std::string& path) {
    const std::string bytes = read_file(path);
    std::istringstream in(bytes);
    std::string line;

    auto next_line = [&]() {
        if (!std::getline(in, line)) throw FormatError("checkpoint: truncated header");
        return split_ws(line);
    };

    auto tok = next_line();
    if (tok.size() != 1 || tok[0] != kMagic)
        throw FormatError("checkpoint: bad magic");
    tok = next_line();
    if (tok.size() != 2 || tok[0] != "version")
        throw FormatError("checkpoint: missing version");
    if (tok[1] != std::to_string(kVersion))
        throw FormatError("checkpoint: unsupported format version " + tok[1] +
                          " (expected " + std::to_string(kVersion) + ")");

    tok = next_line();
    if (tok.empty() || tok[0] != "config") throw FormatError("checkpoint: missing config");
    auto kv = parse_kv(tok, 1);
    ModelConfig cfg;
    try {
        cfg.kind = model_kind_from_name(kv.at("kind"));
        cfg.d_model = std::stoi(kv.at("d_model"));
        auto w = split_csv(kv.at("widths"));
        if (w.size() != 4) throw FormatError("checkpoint: widths must have 4 entries");
        for (int i = 0; i < 4; ++i) cfg.kan_widths[i] = std::stoi(w[i]);
        cfg.mlp_hidden = std::stoi(kv.at("mlp_hidden"));
        cfg.attention_enabled = kv.at("attention") == "1";
        auto g = split_csv(kv.at("grid"));
        if (g.size() != 3) throw FormatError("checkpoint: grid must have 3 entries");
        cfg.spline_intervals = std::stoi(g[0]);
        cfg.spline_lo = parse_double(g[1]);
        cfg.spline_hi = parse_double(g[2]);
        cfg.seed = std::stoull(kv.at("seed"));
    } catch (const std::out_of_range&) {
        throw FormatError("checkpoint: config line missing a key");
    } catch (const std::invalid_argument&) {
        throw FormatError("checkpoint: config line has a malformed value");
    }

    tok = next_line();
    if (tok.empty() || tok[0] != "meta") throw FormatError("checkpoint: missing meta");
    kv = parse_kv(tok, 1);
    TrainMeta meta;
    try {
        meta.epochs_run = std::stoi(kv.at("epochs"));
        meta.best_epoch = std::stoi(kv.at("best_epoch"));
        meta.final_train_loss = parse_double(kv.at("final_train_loss"));
        meta.best_test_loss = parse_double(kv.at("best_test_loss"));
        meta.data_seed = std::stoull(kv.at("data_seed"));
        meta.lr = parse_double(kv.at("lr"));
        meta.lambda = parse_double(kv.at("lambda"));
        meta.batch_size = std::stoi(kv.at("batch"));
    } catch (const std::out_of_range&) {
        throw FormatError("checkpoint: meta line missing a key");
    } catch (const std::invalid_argument&) {
        throw FormatError("checkpoint: meta line has a malformed value");
    }

    tok = next_line();
    if (tok.size() != 2 || tok[0] != "sections")
        throw FormatError("checkpoint: missing section table");
    const int nsections = std::stoi(tok[1]);

    LoadedModel out;
    out.model = build_model(cfg);
    out.meta = meta;
    const auto params = out.model->params();
    const auto names = out.model->param_names();
    if (nsections != static_cast<int>(params.size()))
        throw FormatError("checkpoint: section count does not match model kind");

    std::size_t expected_offset = 0;
    for (int i = 0; i < nsections; ++i) {
        tok = next_line();
        if (tok.size() != 4) throw FormatError("checkpoint: malformed section row");
        if (tok[0] != names[i])
            throw FormatError("checkpoint: section '" + tok[0] + "' expected '" +
                              names[i] + "'");
        const std::size_t off = std::stoull(tok[1]);
        const int rows = std::stoi(tok[2]);
        const int cols = std::stoi(tok[3]);
        if (off != expected_offset || rows != params[i]->rows || cols != params[i]->cols)
            throw FormatError("checkpoint: section '" + tok[0] + "' shape/offset mismatch");
        expected_offset += params[i]->size();
    }
    tok = next_line();
    if (tok.size() != 2 || tok[0] != "data")
        throw FormatError("checkpoint: missing data marker");
    const std::size_t count = std::stoull(tok[1]);
    if (count != expected_offset)
        throw FormatError("checkpoint: data count does not match section table");

    const std::size_t blob_start = static_cast<std::size_t>(in.tellg());
    if (bytes.size() - blob_start != count * 8)
        throw FormatError("checkpoint: parameter blob truncated or oversized");

    std::size_t pos = blob_start;
    for (Mat* p : params) {
        for (double& v : p->d) {
            const std::uint64_t bits = read_u64_le(bytes, pos);
            std::memcpy(&v, &bits, 8);
            pos += 8;
        }
    }
    return out;
}

LatencyStats measure_latency(const Model& model, int n_frames, std::uint64_t input_seed) {
    if (n_frames < 100) throw ArgumentError("measure_latency needs n_frames >= 100");
    SplitMix64 rng(input_seed);
    std::vector<std::vector<double>> inputs;
    inputs.reserve(n_frames);
    const int in_dim = model.config().input_dim();
    for (int i = 0; i < n_frames; ++i) {
        std::vector<double> x(in_dim);
        for (double& v : x) v = rng.next_double();
        inputs.push_back(std::move(x));
    }
    // warmup
    double sink = 0.0;
    for (int i = 0; i < 10; ++i) sink += model.forward(inputs[i % n_frames])[0];

    LatencyStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < n_frames; ++i) {
        const auto f0 = std::chrono::steady_clock::now();
        sink += model.forward(inputs[i])[0];
        const auto f1 = std::chrono::steady_clock::now();
        stats.max_seconds = std::max(
            stats.max_seconds, std::chrono::duration<double>(f1 - f0).count());
    }
    const auto t1 = std::chrono::steady_clock::now();
    stats.mean_seconds = std::chrono::duration<double>(t1 - t0).count() / n_frames;
    if (!std::isfinite(sink)) throw StateError("latency probe produced non-finite output");
    return stats;
}

}  // namespace mimic
