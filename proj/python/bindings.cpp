// Python module `gaitsym._gaitsym`. Clouds are (N, 3) float64 arrays and
// histogram sequences are (frames, h, w) arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaitsym/error.hpp"
#include "gaitsym/eval.hpp"
#include "gaitsym/pipeline.hpp"
#include "gaitsym/synthgait.hpp"

namespace py = pybind11;
using namespace gaitsym;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointCloud to_cloud(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw Error(ErrorCode::ShapeError, "expected an (N, 3) array");
  auto r = a.unchecked<2>();
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) pts.emplace_back(r(i, 0), r(i, 1), r(i, 2));
  return PointCloud(std::move(pts), Frame::Body);
}

Array from_cloud(const PointCloud& c) {
  Array out({static_cast<py::ssize_t>(c.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int k = 0; k < 3; ++k) w(static_cast<py::ssize_t>(i), k) = c[i][k];
  return out;
}

std::vector<PointCloud> to_clouds(const std::vector<Array>& frames) {
  std::vector<PointCloud> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(to_cloud(f));
  return out;
}

py::list from_clouds(const std::vector<PointCloud>& clouds) {
  py::list out;
  for (const auto& c : clouds) out.append(from_cloud(c));
  return out;
}

CylHistogram to_hist(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::ShapeError, "expected an (h, w) array");
  const HistSize size(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  return CylHistogram(size, std::vector<double>(a.data(), a.data() + a.size()), false);
}

Array from_hist(const CylHistogram& h) {
  Array out({h.size().h(), h.size().w()});
  std::copy(h.bins().begin(), h.bins().end(), out.mutable_data());
  return out;
}

std::vector<CylHistogram> to_hists(const Array& a) {
  if (a.ndim() != 3) throw Error(ErrorCode::ShapeError, "expected a (frames, h, w) array");
  const HistSize size(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2)));
  std::vector<CylHistogram> out;
  const double* p = a.data();
  for (py::ssize_t t = 0; t < a.shape(0); ++t, p += size.bin_count())
    out.emplace_back(size, std::vector<double>(p, p + size.bin_count()), false);
  return out;
}

Array from_hists(const std::vector<CylHistogram>& hists) {
  const HistSize size = hists.empty() ? HistSize(1, 2) : hists.front().size();
  Array out({static_cast<py::ssize_t>(hists.size()), static_cast<py::ssize_t>(size.h()),
             static_cast<py::ssize_t>(size.w())});
  double* p = out.mutable_data();
  for (const auto& h : hists) p = std::copy(h.bins().begin(), h.bins().end(), p);
  return out;
}

HalfSequence to_half_sequence(const Array& a, Side side, bool flipped) {
  if (a.ndim() != 3) throw Error(ErrorCode::ShapeError, "expected a (frames, h, w/2) array");
  HalfSequence seq;
  seq.side = side;
  seq.flipped = flipped;
  const auto rows = static_cast<int>(a.shape(1));
  const auto cols = static_cast<int>(a.shape(2));
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  const double* p = a.data();
  for (py::ssize_t t = 0; t < a.shape(0); ++t, p += n)
    seq.frames.emplace_back(rows, cols, side, std::vector<double>(p, p + n));
  return seq;
}

DelaySet to_delays(const py::object& d) {
  if (py::isinstance<py::str>(d)) return DelaySet::parse(d.cast<std::string>());
  if (py::isinstance<py::tuple>(d) && py::len(d) == 2) {
    const auto t = d.cast<std::pair<int, int>>();
    return DelaySet::range(t.first, t.second);
  }
  return DelaySet(d.cast<std::vector<int>>());
}

PipelineConfig make_config(const std::string& hist_size, int segment_len, const py::object& delays, bool recenter,
                           int workers) {
  PipelineConfig c;
  c.hist_size = HistSize::parse(hist_size);
  c.segment_len = segment_len;
  c.delays = to_delays(delays);
  c.recenter = recenter;
  c.workers = workers;
  return c;
}

py::dict report_dict(const SymmetryReport& r) {
  std::vector<double> scores;
  std::vector<int> delays, overlaps;
  for (const auto& s : r.per_segment) {
    scores.push_back(s.score);
    delays.push_back(s.best_delay);
    overlaps.push_back(s.overlap_length);
  }
  py::dict d;
  d["mean_score"] = r.mean_score;
  d["segment_scores"] = py::array(py::cast(scores));
  d["best_delays"] = delays;
  d["overlap_lengths"] = overlaps;
  d["hist_size"] = r.hist_size.to_string();
  d["segment_len"] = r.segment_length;
  d["delays"] = r.delays.to_string();
  d["frames_used"] = r.frames_used;
  d["frames_discarded"] = r.frames_discarded;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gaitsym, m) {
  m.doc() = "Gait symmetry index from 3D point-cloud sequences";

  static py::exception<Error> error(m, "GaitsymError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<GaitParams> params(m, "GaitParams");
  params.def(py::init<>())
      .def_readwrite("fps", &GaitParams::fps)
      .def_readwrite("cycle_period", &GaitParams::cycle_period)
      .def_readwrite("leg_amplitude_left", &GaitParams::leg_amplitude_left)
      .def_readwrite("leg_amplitude_right", &GaitParams::leg_amplitude_right)
      .def_readwrite("leg_phase_left", &GaitParams::leg_phase_left)
      .def_readwrite("leg_phase_right", &GaitParams::leg_phase_right)
      .def_readwrite("leg_length_left", &GaitParams::leg_length_left)
      .def_readwrite("leg_length_right", &GaitParams::leg_length_right)
      .def_readwrite("knee_ratio", &GaitParams::knee_ratio)
      .def_readwrite("arm_amplitude_left", &GaitParams::arm_amplitude_left)
      .def_readwrite("arm_amplitude_right", &GaitParams::arm_amplitude_right)
      .def_readwrite("arm_phase_left", &GaitParams::arm_phase_left)
      .def_readwrite("arm_phase_right", &GaitParams::arm_phase_right)
      .def_readwrite("arm_length_left", &GaitParams::arm_length_left)
      .def_readwrite("arm_length_right", &GaitParams::arm_length_right)
      .def_readwrite("torso_height", &GaitParams::torso_height)
      .def_readwrite("torso_half_depth", &GaitParams::torso_half_depth)
      .def_readwrite("torso_half_width", &GaitParams::torso_half_width)
      .def_readwrite("hip_half_width", &GaitParams::hip_half_width)
      .def_readwrite("shoulder_half_width", &GaitParams::shoulder_half_width)
      .def_readwrite("head_radius", &GaitParams::head_radius)
      .def_readwrite("head_forward", &GaitParams::head_forward)
      .def_readwrite("points_per_frame", &GaitParams::points_per_frame)
      .def_readwrite("noise_sigma", &GaitParams::noise_sigma)
      .def_readwrite("seed", &GaitParams::seed)
      .def("validate", &GaitParams::validate);

  m.def(
      "generate",
      [](const GaitParams& p, const std::string& asymmetry, int frames, int workers) {
        return from_clouds(generate(p, AsymmetrySpec::parse(asymmetry), frames, workers));
      },
      py::arg("params"), py::arg("asymmetry") = "none", py::arg("frames") = 600, py::arg("workers") = 1,
      "Synthetic Body-frame clouds; asymmetry is a preset such as 'phase-left-0.6'.");
  m.def(
      "generate_mirror_pair",
      [](const GaitParams& p, int k, int frames, int workers) {
        return from_clouds(generate_mirror_pair(p, k, frames, workers));
      },
      py::arg("params"), py::arg("k"), py::arg("frames") = 600, py::arg("workers") = 1);

  m.def(
      "sector_index",
      [](const Array& point, double max_y, double min_y, const std::string& hist_size, double offset) {
        if (point.size() != 3) throw Error(ErrorCode::ShapeError, "expected a 3-vector");
        const SectorIndex s = sector_index(Point3(point.at(0), point.at(1), point.at(2)), Extents{max_y, min_y},
                                           HistSize::parse(hist_size), offset);
        return std::make_pair(s.row, s.col);
      },
      py::arg("point"), py::arg("max_y"), py::arg("min_y"), py::arg("hist_size") = "16x16",
      py::arg("angular_offset") = 0.0);
  m.def(
      "estimate",
      [](const Array& cloud, const std::string& hist_size, double offset) {
        return from_hist(estimate(to_cloud(cloud), HistSize::parse(hist_size), offset));
      },
      py::arg("cloud"), py::arg("hist_size") = "16x16", py::arg("angular_offset") = 0.0,
      "Occupancy counts of one (N, 3) cloud as an (h, w) array.");
  m.def(
      "recenter_offset", [](const Array& hist) { return recenter_offset(to_hist(hist)); }, py::arg("hist"));
  m.def(
      "histograms",
      [](const std::vector<Array>& frames, const std::string& hist_size, bool recenter, int workers) {
        const auto clouds = to_clouds(frames);
        HistogramSequence seq = histograms_from_clouds(clouds, HistSize::parse(hist_size), recenter, workers);
        return py::make_tuple(from_hists(seq.frames), seq.angular_offset);
      },
      py::arg("frames"), py::arg("hist_size") = "16x16", py::arg("recenter") = true, py::arg("workers") = 1,
      "Returns (histograms, angular_offset).");

  m.def(
      "cross_correlate",
      [](const Array& left, const Array& right_flipped, const py::object& delays) {
        const SegmentScore s = cross_correlate(to_half_sequence(left, Side::Left, false),
                                               to_half_sequence(right_flipped, Side::Right, true), to_delays(delays));
        return py::make_tuple(s.score, s.best_delay, s.overlap_length);
      },
      py::arg("left"), py::arg("right_flipped"), py::arg("delays"),
      "Score, best delay and overlap length of two (l, h, w/2) half sequences.");
  m.def(
      "assess_histograms",
      [](const Array& hists, int segment_len, const py::object& delays, int workers) {
        const auto frames = to_hists(hists);
        PipelineConfig c;
        c.hist_size = frames.empty() ? c.hist_size : frames.front().size();
        c.segment_len = segment_len;
        c.delays = to_delays(delays);
        c.workers = workers;
        return report_dict(assess_histograms(frames, c));
      },
      py::arg("hists"), py::arg("segment_len") = 120, py::arg("delays") = "-50:50", py::arg("workers") = 1);
  m.def(
      "assess",
      [](const std::vector<Array>& frames, const std::string& hist_size, int segment_len, const py::object& delays,
         bool recenter, int workers) {
        return report_dict(assess_clouds(to_clouds(frames), make_config(hist_size, segment_len, delays, recenter, workers)));
      },
      py::arg("frames"), py::arg("hist_size") = "16x16", py::arg("segment_len") = 120, py::arg("delays") = "-50:50",
      py::arg("recenter") = true, py::arg("workers") = 1, "Symmetry report of a list of Body-frame clouds.");

  m.def(
      "roc",
      [](const std::vector<double>& scores, const std::vector<bool>& abnormal) {
        if (scores.size() != abnormal.size()) throw Error(ErrorCode::ShapeError, "scores and labels differ in length");
        std::vector<LabeledScore> s;
        for (std::size_t i = 0; i < scores.size(); ++i)
          s.push_back({scores[i], abnormal[i] ? Label::Abnormal : Label::Normal, "", ""});
        const RocResult r = roc(s);
        std::vector<double> fpr, tpr, thr;
        for (const auto& p : r.points) {
          fpr.push_back(p.fpr);
          tpr.push_back(p.tpr);
          thr.push_back(p.threshold);
        }
        py::dict d;
        d["auc"] = r.auc;
        d["eer"] = r.eer;
        d["eer_threshold"] = r.eer_threshold;
        d["fpr"] = py::array(py::cast(fpr));
        d["tpr"] = py::array(py::cast(tpr));
        d["thresholds"] = py::array(py::cast(thr));
        return d;
      },
      py::arg("scores"), py::arg("abnormal"), "ROC of 'higher score means abnormal'.");
}
