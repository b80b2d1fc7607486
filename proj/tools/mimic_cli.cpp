// Command-line surface for the facial-mimicry pipeline: dataset generation,
// training, evaluation, ablation sweeps, latency measurement, and a streaming
// mimic mode reading feature frames as JSON lines.

#include <sys/socket.h>
#include <netinet/in.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimic/dataset_gen.hpp"
#include "mimic/metrics.hpp"
#include "mimic/model.hpp"
#include "mimic/report.hpp"
#include "mimic/text_io.hpp"
#include "mimic/trainer.hpp"

using namespace mimic;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitFormat = 3;
constexpr int kExitIo = 4;

struct GenOpts {
    int n = 9000;
    std::uint64_t seed = 7;
    std::uint64_t sim_seed = 555;
    double noise_sigma = kDefaultTrainNoiseSigma;
    bool landmarks = true;
    std::string out = "dataset.jsonl";
};

int cmd_gen_data(const GenOpts& o) {
    const ServoLayout layout = make_default_layout();
    const FaceSim sim = FaceSim::make(o.sim_seed, o.noise_sigma);
    const BlendBasis basis = make_default_basis();
    PolicyConfig cfg;
    cfg.base_seed = o.seed;

    const Dataset ds =
        generate_dataset(cfg, o.n, sim, layout, o.landmarks ? &basis : nullptr);

    std::size_t violations = 0;
    for (const auto& r : ds.records)
        if (!check_constraints(r.servo, layout, kGenSyncTol).empty()) ++violations;

    save_dataset(ds, o.out);
    std::cout << "records " << ds.size() << "\n";
    std::cout << "violations " << violations << "\n";
    std::cout << "checksum " << to_hex(file_checksum(o.out)) << "\n";
    return violations == 0 ? kExitOk : 1;
}

struct TrainOpts {
    std::string data;
    std::string out = "model.ckpt";
    std::string history = "loss_history.csv";
    std::string kind = "attention-kan";
    int epochs = 300;
    int patience = 30;
    int batch = 256;
    double lr = 1e-5;
    double lambda = 0.01;
    std::uint64_t model_seed = 1;
    std::uint64_t shuffle_seed = 7;
    std::uint64_t split_seed = 99;
    int train_n = 8000;
    int test_n = 1000;
    bool no_attention = false;
    int d_model = 16;
    int kan_hidden = 40;
};

TrainConfig make_train_config(const TrainOpts& o) {
    TrainConfig tc;
    tc.model.kind = model_kind_from_name(o.kind);
    tc.model.seed = o.model_seed;
    tc.model.attention_enabled = !o.no_attention;
    tc.model.d_model = o.d_model;
    tc.model.kan_widths = {kNumFeatures, o.kan_hidden, o.kan_hidden, kNumServos};
    tc.lr = o.lr;
    tc.lambda = o.lambda;
    tc.batch_size = o.batch;
    tc.epochs = o.epochs;
    tc.patience = o.patience;
    tc.shuffle_seed = o.shuffle_seed;
    return tc;
}

int cmd_train(const TrainOpts& o) {
    const Dataset ds = load_dataset(o.data);
    auto [train, test] = split_dataset(ds, o.train_n, o.test_n, o.split_seed);
    const TrainConfig tc = make_train_config(o);

    const TrainResult r = train_model(train, test, tc, &std::cerr);
    write_file_atomic(o.history, loss_history_csv(r.history));
    save_checkpoint(*r.best_model, r.meta, o.out);

    std::cout << "epochs_run " << r.meta.epochs_run << "\n";
    std::cout << "best_epoch " << r.meta.best_epoch << "\n";
    std::cout << "best_test_loss " << format_double(r.meta.best_test_loss) << "\n";
    std::cout << "best_test_mse " << format_double(r.best_eval.mse) << "\n";
    std::cout << "best_test_mae " << format_double(r.best_eval.mae) << "\n";
    std::cout << "checkpoint " << o.out << "\n";
    return kExitOk;
}

struct EvalOpts {
    std::string ckpt;
    std::string data;
    std::string out_dir = "report";
    std::uint64_t split_seed = 99;
    int train_n = 8000;
    int test_n = 1000;
    int render_n = 100;  // samples that get landmark/image metrics
    int traj_len = 30;
    std::uint64_t traj_index = 0;
    bool compare_untrained = false;
};

Landmarks landmarks_from_flat(const std::vector<double>& flat) {
    Landmarks lm(kNumLandmarks);
    for (int i = 0; i < kNumLandmarks; ++i) lm[i] = {flat[2 * i], flat[2 * i + 1]};
    return lm;
}

int cmd_eval(const EvalOpts& o) {
    const LoadedModel loaded = load_checkpoint(o.ckpt);
    const Model& model = *loaded.model;
    const Dataset ds = load_dataset(o.data);
    auto [train, test] = split_dataset(ds, o.train_n, o.test_n, o.split_seed);
    (void)train;

    const ServoLayout layout = make_default_layout();
    const LossConfig loss_cfg = make_loss_config(layout, loaded.meta.lambda);
    const FaceSim sim = FaceSim::make(ds.sim_seed, ds.noise_sigma);
    const BlendBasis basis = make_default_basis();
    const ModelKind kind = model.config().kind;

    const EvalStats stats = evaluate_model(model, test, loss_cfg);

    // per-sample rows; landmark/image metrics on the first render_n samples
    std::vector<SampleReport> rows;
    std::vector<double> errors;
    SummaryReport summary;
    summary.samples = test.size();
    double ld_sum = 0.0, id_sum = 0.0, px_sum = 0.0;
    std::size_t rendered = 0;
    for (const auto& rec : test.records) {
        SampleReport row;
        row.index = rec.index;
        const ServoFrame pred =
            clamp_frame(model.forward(record_input(rec, kind)), layout);
        double sq = 0.0, ab = 0.0;
        for (int c = 0; c < kNumServos; ++c) {
            const double d = pred[c] - rec.servo[c];
            sq += d * d;
            ab += std::abs(d);
        }
        row.servo_mse = sq / kNumServos;
        row.servo_mae = ab / kNumServos;
        errors.push_back(row.servo_mae);

        if (static_cast<int>(rendered) < o.render_n) {
            const Landmarks target_lm =
                rec.landmarks.empty()
                    ? compose_landmarks(FeatureVector(rec.features), basis)
                    : landmarks_from_flat(rec.landmarks);
            const Landmarks pred_lm =
                compose_landmarks(servo_to_features(sim, pred), basis);
            row.landmark_dist = landmark_distance(target_lm, pred_lm);
            const Image target_img = render_image(target_lm);
            const Image pred_img = render_image(pred_lm);
            row.image_sim = image_distance(target_img, pred_img);
            row.pixel_dist = pixel_distance(target_img, pred_img);
            ld_sum += row.landmark_dist;
            id_sum += row.image_sim;
            px_sum += row.pixel_dist;
            ++rendered;
        }
        rows.push_back(row);
    }
    summary.mean_servo_mae = stats.mae;
    summary.mean_servo_mse = stats.mse;
    if (rendered > 0) {
        summary.mean_landmark_dist = ld_sum / rendered;
        summary.mean_image_sim = id_sum / rendered;
        summary.mean_pixel_dist = px_sum / rendered;
    }

    // sequential indicators on a neutral-peak-neutral mimic episode
    PolicyConfig pcfg;
    pcfg.base_seed = ds.base_seed;
    const Trajectory servo_traj =
        sample_trajectory(pcfg, o.traj_index, o.traj_len, layout);
    LandmarkTrajectory human_lm, robot_lm;
    Trajectory robot_servo;
    robot_servo.rate_hz = servo_traj.rate_hz;
    for (const auto& frame : servo_traj.frames) {
        const FeatureVector fv = servo_to_features(sim, frame);
        human_lm.push_back(compose_landmarks(fv, basis));
        ServoFrame pred;
        if (kind == ModelKind::MlpLandmark) {
            std::vector<double> flat;
            flat.reserve(2 * kNumLandmarks);
            for (const auto& p : human_lm.back()) {
                flat.push_back(p.x);
                flat.push_back(p.y);
            }
            pred = clamp_frame(model.forward(flat), layout);
        } else {
            pred = clamp_frame(model.forward(fv.values), layout);
        }
        robot_servo.frames.push_back(pred);
        robot_lm.push_back(compose_landmarks(servo_to_features(sim, pred), basis));
    }
    SeqParams seq;
    summary.gs = space_similarity(human_lm, robot_lm, seq);
    summary.gt = time_similarity(human_lm, robot_lm, seq);
    summary.gd = movement_smoothness(robot_servo, seq);

    // CED curves (optionally against an untrained twin on a shared grid)
    std::vector<std::pair<std::string, CedCurve>> curves;
    if (o.compare_untrained) {
        auto untrained = build_model(model.config());
        std::vector<double> untrained_errors = per_sample_errors(*untrained, test);
        double mx = 0.0;
        for (double e : errors) mx = std::max(mx, e);
        for (double e : untrained_errors) mx = std::max(mx, e);
        std::vector<double> grid(kCedGridSize);
        for (int i = 0; i < kCedGridSize; ++i)
            grid[i] = mx * static_cast<double>(i) / (kCedGridSize - 1);
        curves.emplace_back("trained", ced_curve_on_grid(errors, grid));
        curves.emplace_back("untrained", ced_curve_on_grid(untrained_errors, grid));
    } else {
        curves.emplace_back("trained", ced_curve(errors));
    }

    write_file_atomic(o.out_dir + "/per_sample.csv", per_sample_csv(rows));
    write_file_atomic(o.out_dir + "/summary.csv", summary_csv(summary));
    write_file_atomic(o.out_dir + "/ced.csv", ced_csv(curves));
    write_file_atomic(o.out_dir + "/ced.svg", ced_svg(curves));

    std::cout << "samples " << summary.samples << "\n";
    std::cout << "eval_total_loss " << format_double(stats.total) << "\n";
    std::cout << "checkpoint_best_test_loss "
              << format_double(loaded.meta.best_test_loss) << "\n";
    std::cout << "mean_servo_mae " << format_double(stats.mae) << "\n";
    std::cout << "gs " << format_double(summary.gs) << "\n";
    std::cout << "gt " << format_double(summary.gt) << "\n";
    std::cout << "gd " << format_double(summary.gd) << "\n";
    std::cout << "report_dir " << o.out_dir << "\n";
    return kExitOk;
}

struct AblateOpts {
    std::string data;
    std::string out = "ablation.csv";
    int epochs = 60;
    int patience = 30;
    int batch = 256;
    double lr = 3e-3;
    std::uint64_t model_seed = 1;
    std::uint64_t shuffle_seed = 7;
    std::uint64_t split_seed = 99;
    int train_n = 8000;
    int test_n = 1000;
    std::vector<double> lambdas = {0.0, 0.1, 0.01, 0.001};
};

int cmd_ablate(const AblateOpts& o) {
    const Dataset ds = load_dataset(o.data);
    auto [train, test] = split_dataset(ds, o.train_n, o.test_n, o.split_seed);

    std::ostringstream csv;
    csv << "backbone,attention,lambda,best_test_mse,best_test_mae,best_test_total,"
           "best_epoch\n";
    for (bool attention : {true, false}) {
        for (double lambda : o.lambdas) {
            TrainOpts to;
            to.epochs = o.epochs;
            to.patience = o.patience;
            to.batch = o.batch;
            to.lr = o.lr;
            to.lambda = lambda;
            to.model_seed = o.model_seed;
            to.shuffle_seed = o.shuffle_seed;
            to.no_attention = !attention;
            const TrainConfig tc = make_train_config(to);
            const TrainResult r = train_model(train, test, tc, nullptr);
            csv << "attention-kan-bs," << (attention ? "on" : "off") << ","
                << format_double(lambda) << "," << format_double(r.best_eval.mse) << ","
                << format_double(r.best_eval.mae) << ","
                << format_double(r.best_eval.total) << "," << r.meta.best_epoch << "\n";
            std::cerr << "ablate attention=" << (attention ? "on" : "off")
                      << " lambda=" << lambda << " mse=" << r.best_eval.mse << "\n";
        }
    }
    write_file_atomic(o.out, csv.str());
    std::cout << "table " << o.out << "\n";
    return kExitOk;
}

int cmd_latency(const std::string& ckpt, int frames) {
    LatencyStats s;
    if (ckpt.empty()) {
        const auto model = build_model(ModelConfig{});
        s = measure_latency(*model, frames);
    } else {
        const LoadedModel loaded = load_checkpoint(ckpt);
        s = measure_latency(*loaded.model, frames);
    }
    std::cout << "frames " << frames << "\n";
    std::cout << "mean_ms " << format_double(s.mean_seconds * 1e3) << "\n";
    std::cout << "max_ms " << format_double(s.max_seconds * 1e3) << "\n";
    return kExitOk;
}

// One streaming step: parse a feature frame line, run the model, clamp to
// the layout limits. Returns the output JSON line.
std::string mimic_step(const Model& model, const ServoLayout& layout,
                       const std::string& line, std::uint64_t frame_no,
                       double* latency_ms) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
        return "{\"frame\":" + std::to_string(frame_no) +
               ",\"error\":\"malformed JSON\"}";

    std::vector<double> features;
    if (j.contains("features") && j["features"].is_array()) {
        for (const auto& v : j["features"]) {
            if (!v.is_number())
                return "{\"frame\":" + std::to_string(frame_no) +
                       ",\"error\":\"non-numeric feature\"}";
            features.push_back(v.get<double>());
        }
    } else if (j.contains("coeffs") && j["coeffs"].is_array() && j.contains("pose") &&
               j["pose"].is_array()) {
        for (const auto& v : j["coeffs"]) {
            if (!v.is_number())
                return "{\"frame\":" + std::to_string(frame_no) +
                       ",\"error\":\"non-numeric coefficient\"}";
            features.push_back(v.get<double>());
        }
        for (const auto& v : j["pose"]) {
            if (!v.is_number())
                return "{\"frame\":" + std::to_string(frame_no) +
                       ",\"error\":\"non-numeric pose value\"}";
            features.push_back(v.get<double>());
        }
    } else {
        return "{\"frame\":" + std::to_string(frame_no) +
               ",\"error\":\"expected 'features' or 'coeffs'+'pose'\"}";
    }
    if (features.size() != static_cast<std::size_t>(kNumFeatures))
        return "{\"frame\":" + std::to_string(frame_no) +
               ",\"error\":\"expected 55 values, got " +
               std::to_string(features.size()) + "\"}";
    for (double v : features)
        if (!(v >= 0.0 && v <= 1.0))
            return "{\"frame\":" + std::to_string(frame_no) +
                   ",\"error\":\"feature outside [0,1]\"}";

    const auto t0 = std::chrono::steady_clock::now();
    const ServoFrame servo = clamp_frame(model.forward(features), layout);
    const auto t1 = std::chrono::steady_clock::now();
    *latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    std::string out = "{\"frame\":" + std::to_string(frame_no) + ",\"servo\":[";
    for (int c = 0; c < kNumServos; ++c) {
        if (c) out += ",";
        out += format_double(servo[c]);
    }
    out += "]}";
    return out;
}

void mimic_stream(const Model& model, std::istream& in, std::ostream& out) {
    const ServoLayout layout = make_default_layout();
    std::string line;
    std::uint64_t frame_no = 0;
    std::uint64_t ok = 0, errors = 0;
    double total_ms = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double latency_ms = -1.0;
        const std::string reply = mimic_step(model, layout, line, frame_no, &latency_ms);
        out << reply << "\n" << std::flush;
        if (latency_ms >= 0.0) {
            ++ok;
            total_ms += latency_ms;
            std::cerr << "frame " << frame_no << " latency_ms " << latency_ms << "\n";
        } else {
            ++errors;
        }
        ++frame_no;
    }
    std::cerr << "processed " << ok << " frames, " << errors << " errors";
    if (ok > 0) std::cerr << ", mean latency_ms " << (total_ms / ok);
    std::cerr << "\n";
}

int cmd_mimic(const std::string& ckpt, int tcp_port) {
    const LoadedModel loaded = load_checkpoint(ckpt);
    if (tcp_port == 0) {
        mimic_stream(*loaded.model, std::cin, std::cout);
        return kExitOk;
    }

    // optional local TCP transport: one client at a time, same line protocol
    const int server = ::socket(AF_INET, SOCK_STREAM, 0);
    if (server < 0) throw IoError("cannot create socket");
    int one = 1;
    ::setsockopt(server, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(tcp_port));
    if (::bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(server);
        throw IoError("cannot bind 127.0.0.1:" + std::to_string(tcp_port));
    }
    if (::listen(server, 1) != 0) {
        ::close(server);
        throw IoError("cannot listen on port " + std::to_string(tcp_port));
    }
    std::cerr << "listening on 127.0.0.1:" << tcp_port << "\n";
    const int client = ::accept(server, nullptr, nullptr);
    if (client < 0) {
        ::close(server);
        throw IoError("accept failed");
    }

    const ServoLayout layout = make_default_layout();
    std::string buffer;
    char chunk[4096];
    std::uint64_t frame_no = 0, ok = 0, errors = 0;
    double total_ms = 0.0;
    ssize_t got;
    while ((got = ::read(client, chunk, sizeof(chunk))) > 0) {
        buffer.append(chunk, static_cast<std::size_t>(got));
        std::size_t nl;
        while ((nl = buffer.find('\n')) != std::string::npos) {
            const std::string line = buffer.substr(0, nl);
            buffer.erase(0, nl + 1);
            if (line.empty()) continue;
            double latency_ms = -1.0;
            const std::string reply =
                mimic_step(*loaded.model, layout, line, frame_no, &latency_ms) + "\n";
            if (::write(client, reply.data(), reply.size()) < 0) {
                ::close(client);
                ::close(server);
                throw IoError("client write failed");
            }
            if (latency_ms >= 0.0) {
                ++ok;
                total_ms += latency_ms;
                std::cerr << "frame " << frame_no << " latency_ms " << latency_ms << "\n";
            } else {
                ++errors;
            }
            ++frame_no;
        }
    }
    std::cerr << "processed " << ok << " frames, " << errors << " errors";
    if (ok > 0) std::cerr << ", mean latency_ms " << (total_ms / ok);
    std::cerr << "\n";
    ::close(client);
    ::close(server);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"facial-mimicry pipeline: expert-policy data, attention-KAN training, "
                 "metric evaluation, and streaming inference"};
    app.set_config("--config", "", "read options from a config file");
    app.require_subcommand(1);

    GenOpts gen;
    auto* cgen = app.add_subcommand("gen-data", "generate a constraint-valid dataset");
    cgen->add_option("--n", gen.n, "number of records");
    cgen->add_option("--seed", gen.seed, "expert policy base seed");
    cgen->add_option("--sim-seed", gen.sim_seed, "face simulator seed");
    cgen->add_option("--noise-sigma", gen.noise_sigma, "observation noise sigma");
    cgen->add_flag("--landmarks,!--no-landmarks", gen.landmarks,
                   "store landmark observations");
    cgen->add_option("--out", gen.out, "output dataset path");

    TrainOpts tr;
    auto* ctrain = app.add_subcommand("train", "train a model on a dataset");
    ctrain->add_option("--data", tr.data, "dataset path")->required();
    ctrain->add_option("--out", tr.out, "checkpoint output path");
    ctrain->add_option("--history", tr.history, "loss history CSV path");
    ctrain->add_option("--kind", tr.kind,
                       "attention-kan | mlp-blendshape | mlp-landmark");
    ctrain->add_option("--epochs", tr.epochs, "epoch budget");
    ctrain->add_option("--patience", tr.patience, "early-stop patience");
    ctrain->add_option("--batch", tr.batch, "batch size");
    ctrain->add_option("--lr", tr.lr, "Adam learning rate");
    ctrain->add_option("--lambda", tr.lambda, "consistency loss weight");
    ctrain->add_option("--model-seed", tr.model_seed, "parameter init seed");
    ctrain->add_option("--shuffle-seed", tr.shuffle_seed, "epoch shuffle seed");
    ctrain->add_option("--split-seed", tr.split_seed, "train/test split seed");
    ctrain->add_option("--train-n", tr.train_n, "training split size");
    ctrain->add_option("--test-n", tr.test_n, "test split size");
    ctrain->add_flag("--no-attention", tr.no_attention, "bypass the attention mixer");
    ctrain->add_option("--d-model", tr.d_model, "token embedding width");
    ctrain->add_option("--kan-hidden", tr.kan_hidden, "KAN hidden width");

    EvalOpts ev;
    auto* ceval = app.add_subcommand("eval", "evaluate a checkpoint");
    ceval->add_option("--ckpt", ev.ckpt, "checkpoint path")->required();
    ceval->add_option("--data", ev.data, "dataset path")->required();
    ceval->add_option("--out-dir", ev.out_dir, "report directory (must exist)");
    ceval->add_option("--split-seed", ev.split_seed, "train/test split seed");
    ceval->add_option("--train-n", ev.train_n, "training split size");
    ceval->add_option("--test-n", ev.test_n, "test split size");
    ceval->add_option("--render-n", ev.render_n,
                      "samples given landmark/image metrics");
    ceval->add_option("--traj-len", ev.traj_len, "sequential metric window length");
    ceval->add_option("--traj-index", ev.traj_index, "trajectory index");
    ceval->add_flag("--compare-untrained", ev.compare_untrained,
                    "add an untrained twin's CED curve");

    AblateOpts ab;
    auto* cablate = app.add_subcommand("ablate", "lambda x attention sweep");
    cablate->add_option("--data", ab.data, "dataset path")->required();
    cablate->add_option("--out", ab.out, "ablation table CSV path");
    cablate->add_option("--epochs", ab.epochs, "epoch budget per run");
    cablate->add_option("--patience", ab.patience, "early-stop patience");
    cablate->add_option("--batch", ab.batch, "batch size");
    cablate->add_option("--lr", ab.lr, "Adam learning rate");
    cablate->add_option("--model-seed", ab.model_seed, "parameter init seed");
    cablate->add_option("--shuffle-seed", ab.shuffle_seed, "epoch shuffle seed");
    cablate->add_option("--split-seed", ab.split_seed, "train/test split seed");
    cablate->add_option("--train-n", ab.train_n, "training split size");
    cablate->add_option("--test-n", ab.test_n, "test split size");
    cablate->add_option("--lambdas", ab.lambdas, "lambda grid");

    std::string lat_ckpt;
    int lat_frames = 1000;
    auto* clat = app.add_subcommand("latency", "single-frame forward latency");
    clat->add_option("--ckpt", lat_ckpt, "checkpoint (default-config model if omitted)");
    clat->add_option("--frames", lat_frames, "number of frames");

    std::string mim_ckpt;
    int mim_tcp = 0;
    auto* cmim = app.add_subcommand(
        "mimic", "stream feature frames (JSON lines) to servo frames");
    cmim->add_option("--ckpt", mim_ckpt, "checkpoint path")->required();
    cmim->add_option("--tcp", mim_tcp, "serve one client on 127.0.0.1:PORT");

    std::string layout_out = "servo_layout.txt";
    auto* clay = app.add_subcommand("export-layout", "write the canonical servo layout");
    clay->add_option("--out", layout_out, "output path");

    std::string basis_out = "blend_basis.txt";
    auto* cbas = app.add_subcommand("export-basis", "write the blendshape basis");
    cbas->add_option("--out", basis_out, "output path");

    try {
        app.parse(argc, argv);
        if (cgen->parsed()) return cmd_gen_data(gen);
        if (ctrain->parsed()) return cmd_train(tr);
        if (ceval->parsed()) return cmd_eval(ev);
        if (cablate->parsed()) return cmd_ablate(ab);
        if (clat->parsed()) return cmd_latency(lat_ckpt, lat_frames);
        if (cmim->parsed()) return cmd_mimic(mim_ckpt, mim_tcp);
        if (clay->parsed()) {
            save_layout(make_default_layout(), layout_out);
            std::cout << "layout " << layout_out << "\n";
            return kExitOk;
        }
        if (cbas->parsed()) {
            save_basis(make_default_basis(), basis_out);
            std::cout << "basis " << basis_out << "\n";
            return kExitOk;
        }
        return kExitArgument;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitArgument;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return kExitArgument;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
