export { parseAggregateCsv, parseGridCsv, AggregateRow, GridRow, REGIONS } from "./csv.js";
export { renderCurves, CurvesOptions, CurvesPlot, PRE_COLOR, POST_COLOR } from "./curves.js";
export {
  renderPhase,
  PhaseOptions,
  PhasePlot,
  IMPOSSIBLE_COLOR,
  PAIRWISE_COLOR,
  HATCH_BASE,
  HATCH_STRIPE,
  BOUNDARY_COLOR,
} from "./phase.js";
export { encodePng, decodePng } from "./png.js";
export { Raster, Color } from "./raster.js";
