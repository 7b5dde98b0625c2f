import plotly.express as px

from rrsynth.optimal import Playout


def playout_figure(play: Playout, title=None):
    """Line chart of waiting times and penalty per position of a playout."""
    df = play.to_frame()
    value_columns = [c for c in df.columns if c not in ("position", "vertex")]
    # wide to long so every series gets its own trace
    long_df = df.melt(id_vars=["position", "vertex"], value_vars=value_columns, var_name="series", value_name="value")
    fig = px.line(
        long_df,
        x="position",
        y="value",
        color="series",
        hover_data=["vertex"],
        markers=True,
        title=title or "Waiting times and penalty along the play",
    )
    fig.update_layout(xaxis_title="Position", yaxis_title="Steps / penalty", legend_title="Series")
    return fig
